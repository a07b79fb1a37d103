import os
import argparse

from nrcsynth.documents import (
    dump_definition, dump_instance, dump_partition, dump_problem)
from nrcsynth.fixtures import (
    fo_collection_proof, fo_interpolation_proof, fo_reflexivity_proof,
    fo_replacement_proof, fo_unfocused_proof, identity_definition,
    identity_problem, nesting_definition, reflexivity_proof)
from nrcsynth.fo.parser import format_fo_proof
from nrcsynth.instances import Instance
from nrcsynth.parser import format_proof, parse_value, parse_type
from nrcsynth.synthesizer import partition
from nrcsynth.syntax import Var
from nrcsynth.transforms.base import index_of

FLATTEN = 'bigunion(bigunion({<pi1(b), e>} | e in pi2(b)) | b in B)\n'


def write(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, 'w') as f:
        f.write(text)
    print(f'wrote {path}')


def run(args):
    os.makedirs(args.out_dir, exist_ok=True)

    # Nesting a flat relation.
    nesting = nesting_definition()
    write(args.out_dir, 'simplenesting.fproof',
          format_proof(nesting.witness, 'focused'))
    write(args.out_dir, 'simplenesting.yaml', dump_definition(nesting))
    seq = nesting.witness.conclusion
    write(args.out_dir, 'simplenesting.sides.yaml',
          dump_partition(partition(seq, nesting,
                                   index_of(seq, nesting.goal()))))

    # Identity views.
    for ty, stem in (('set(ur)', 'identity'), ('ur', 'identity_ur')):
        defn = identity_definition(ty)
        write(args.out_dir, f'{stem}.yaml', dump_problem(identity_problem(ty)))
        write(args.out_dir, f'{stem}.fproof',
              format_proof(defn.witness, 'focused'))

    write(args.out_dir, 'reflexivity.proof',
          format_proof(reflexivity_proof(), 'general'))

    # Flattening, for eval.
    b = Var('B', parse_type('set((ur * set(ur)))'))
    write(args.out_dir, 'nested.yaml',
          dump_instance(Instance({b: parse_value('[<4, [6, 9]>]')})))
    write(args.out_dir, 'flatten.nrc', FLATTEN)

    # First-order proofs.
    write(args.out_dir, 'fo_interpolation.foproof',
          format_fo_proof(fo_interpolation_proof()))
    p, goal = fo_collection_proof()
    write(args.out_dir, 'fo_collection.foproof', format_fo_proof(p, goal))
    for name, build in (('fo_unfocused', fo_unfocused_proof),
                        ('fo_reflexivity', fo_reflexivity_proof),
                        ('fo_replacement', fo_replacement_proof)):
        write(args.out_dir, f'{name}.foproof', format_fo_proof(build()))


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('--out_dir', type=str, default='fixtures')
    args = parser.parse_args()
    run(args)
