import sys

from src.cli import CliRunner


def main() -> None:
    """ Command-line entry point: python main.py <command> [flags]. """
    sys.exit(CliRunner.run(sys.argv[1:]))


if __name__ == "__main__":
    main()
