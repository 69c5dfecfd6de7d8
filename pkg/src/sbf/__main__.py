"""Allow ``python -m sbf``."""

from .cli import main

main(prog_name="sbf")
