#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Common errors
"""

from mkdocs.exceptions import ConfigurationError, MkDocsException


class AlvError(MkDocsException):
    """The base class of all errors in this package.

    This is a `click.ClickException`: when it escapes a command of the `alv` CLI it is displayed as
    `Error: <message>` and the process exits with code 2 ("could not run").
    """

    exit_code = 2


class ConfigError(AlvError, ConfigurationError):
    """Invalid run configuration, command-line option, expression or pair file."""


class ExpressionError(ConfigError):
    pass


class PairFileError(ConfigError):
    pass


class ModelError(AlvError):
    """A model could not be built (non-positive rate, degenerate grid, unknown family)."""


class NonFiniteField(AlvError):
    pass


class GridMismatch(AlvError):
    """Two objects that should live on the same model do not."""


class NearDegenerateVolume(AlvError):
    pass


class InvalidInvariants(AlvError):
    """A square root of f_- f_+ was required but f_- or f_+ is not positive."""


class DegenerateKernel(AlvError):
    pass


class NonContact(AlvError):
    pass


class NotAnnihilating(AlvError):
    """A 1-form that should vanish on the flow direction does not."""


class NotEigen(AlvError):
    """A 1-form is not an eigenvector of the Lie derivative along the flow."""


class NotOriented(AlvError):
    pass


class NotInvariant(AlvError):
    """A form that should be invariant under the flow is not."""


class OrientationMismatch(AlvError):
    pass


class NonPositiveKappa(AlvError):
    pass


class EpsilonTooLarge(ConfigError):
    pass


class InvalidProfile(AlvError):
    pass


class NotProportional(AlvError):
    pass
