#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
