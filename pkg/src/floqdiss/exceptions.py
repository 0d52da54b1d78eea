"""Exception hierarchy shared by all floqdiss modules."""


class FloqdissError(Exception):
    """Base class for all errors raised by this package."""


class NonHermitianInput(FloqdissError):
    """A matrix that must be Hermitian (or a Fourier family that must make
    H(t) Hermitian for all t) fails the componentwise check."""


class AccuracyFailure(FloqdissError):
    """A numerical contract was violated (unitarity defect, solver residual,
    negative probabilities beyond noise level) even after automatic retries."""


class TruncationFailure(FloqdissError):
    """The Fourier tail of a Floquet function stays above tolerance at the
    maximal harmonic cutoff."""


class ShiftOverflow(FloqdissError):
    """A representative shift would push nonzero harmonics outside the
    available storage window."""


class ZeroFrequency(FloqdissError):
    """The thermal weight N(w) was requested at w = 0, where it diverges."""


class ResonantDivergence(FloqdissError):
    """The rate kernel N(w) J(|w|) is unbounded at w -> 0 for the given
    spectral density (constant J); the channel must be treated as degenerate."""


class WindowTooSmall(FloqdissError):
    """A harmonic index ell beyond the convolution support 2K was requested."""


class NonErgodic(FloqdissError):
    """The directed rate graph is not strongly connected, so the stationary
    distribution is not unique.  Per-component solutions are attached."""

    def __init__(self, message, components=None):
        super().__init__(message)
        # list of (state-index array, local probability array) per component
        self.components = components or []


class InconsistentPseudoForms(FloqdissError):
    """The two independent evaluations of the pseudo-transition dissipation
    rate disagree, signalling a rate-table bug."""


class ParseError(FloqdissError):
    """A configuration file is not well-formed JSON."""


class ValidationError(FloqdissError):
    """A configuration violates the schema; the message names the field."""


class DegenerateMonodromyWarning(UserWarning):
    """Two monodromy eigenphases are (nearly) degenerate; state labels within
    the degenerate subspace are basis-dependent."""


class DegenerateChannelWarning(UserWarning):
    """A transition channel hit a resonant divergence and was excluded from
    the rate totals."""
