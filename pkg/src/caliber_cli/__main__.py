"""
Entry point for running the package as a module.

This allows the CLI to be run with:
    python -m caliber_cli
"""

from caliber_cli.cli import app

if __name__ == "__main__":
    app()
