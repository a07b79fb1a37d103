import os
import sys

from nrcsynth.cli import build_parser, configure_logging, dispatch, \
    load_config


def run(args):
    config = load_config(args.config)
    configure_logging(config, args.verbose)
    return dispatch(args, config)


if __name__ == '__main__':
    parser = build_parser(
        default_config=os.path.join('config', 'default.yaml'))
    args = parser.parse_args()
    sys.exit(run(args))
