"""
Main Entry Point - Runs the ontorepair command line

    python main.py check corpus/animals.onto
    python main.py repair broken.onto --method weaken --seed 7 --trace trace.json
"""

import sys

from cli.commands import dispatch


def main():
    """Main function"""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
