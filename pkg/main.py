import sys

from hyperdual.cli.app import run


def main():
    """Run the hyperdual command-line tool"""
    sys.exit(run())


if __name__ == "__main__":
    main()
