#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
from .cli import cli

if __name__ == "__main__":
    cli(prog_name="alv")
