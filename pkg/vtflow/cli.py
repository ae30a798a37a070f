# -*- coding: utf-8 -*-
# ---------------------------------------------------------------------------
# Command line interface
# Author: vtflow contributors
# Last Updated: 2026-10-19
# Usage: Installed as the 'vtflow' console script.
# Description: "Command line interface" parses the vtflow subcommands, loads the scenario and runs the requested stages. Errors are reported on stderr and mapped to their exit codes.
# ---------------------------------------------------------------------------

import argparse
import sys

from vtflow.errors import VtflowError
from vtflow.run_pipeline import certify_command
from vtflow.run_pipeline import cutoff_command
from vtflow.run_pipeline import flow_command
from vtflow.run_pipeline import reduced_command
from vtflow.run_pipeline import run_pipeline
from vtflow.run_pipeline import verify_command
from vtflow.scenario import load_scenario


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--strict-proof', action='store_true', default=None,
                        help='use the coefficient C1 - 6 epsilon - m3^2 in the backward-flow bound')
    common.add_argument('--seed', type=int, default=None, help='seed for sampling-based certifications')
    common.add_argument('--out', default=None, help='output directory')
    common.add_argument('--quiet', action='store_true', help='suppress progress lines')

    parser = argparse.ArgumentParser(prog='vtflow',
                                     description='VT-harmonic map heat flow laboratory.')
    commands = parser.add_subparsers(dest='command', required=True)
    for name, text in (('run', 'run every stage'),
                       ('certify', 'certify the domain and target hypotheses'),
                       ('cutoff', 'certify the cutoff function'),
                       ('flow', 'run the flow and record frames'),
                       ('reduced', 'tabulate reduced distances')):
        command = commands.add_parser(name, parents=[common], help=text)
        command.add_argument('config', help='scenario file')
    command = commands.add_parser('verify', parents=[common], help='verify recorded frames against the bounds')
    command.add_argument('config', help='scenario file')
    command.add_argument('frames', help='frames.csv of an earlier flow')
    return parser


def main(argv=None):
    """
    Description: entry point of the vtflow console script
    Inputs: 'argv' -- argument list; sys.argv[1:] when omitted
    Returned Value: Returns the process exit code
    Preconditions: none
    """

    arguments = build_parser().parse_args(argv)
    echo = not arguments.quiet
    try:
        scenario = load_scenario(arguments.config, seed=arguments.seed, out=arguments.out)
        if echo:
            print(f'Scenario {scenario.name}: {arguments.command}')
        if arguments.command == 'run':
            return run_pipeline(scenario, arguments.strict_proof, echo)
        if arguments.command == 'verify':
            return verify_command(scenario, arguments.frames, arguments.strict_proof, echo)
        command = {'certify': certify_command, 'cutoff': cutoff_command, 'flow': flow_command,
                   'reduced': reduced_command}[arguments.command]
        return command(scenario, echo)
    except VtflowError as error:
        print(f'vtflow: {type(error).__name__}: {error.message}', file=sys.stderr)
        return error.exit_code
    except OSError as error:
        print(f'vtflow: {error}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
