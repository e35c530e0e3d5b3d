"""Exceptions raised by the numerical operators in this package."""


class ProjdiffError(Exception):
    """Base class for all package errors."""


class NonHermitianError(ProjdiffError):
    """Input matrix fails the Hermitian tolerance.

    Carries the measured relative asymmetry ``defect``.
    """

    def __init__(self, defect, tol):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(f"matrix asymmetry {self.defect:.3e} exceeds tolerance {self.tol:.1e}")


class SpectralCollisionError(ProjdiffError):
    """Spectra of the two Sylvester coefficients are too close.

    Carries the offending minimal eigenvalue gap.
    """

    def __init__(self, gap, required):
        self.gap = float(gap)
        self.required = float(required)
        super().__init__(f"spectral gap {self.gap:.3e} below required {self.required:.3e}")


class GapViolationError(ProjdiffError):
    """An eigenvalue sits too close to the probe energy.

    Carries the nearest eigenvalue so callers can move the probe.
    """

    def __init__(self, probe, nearest):
        self.probe = float(probe)
        self.nearest = float(nearest)
        super().__init__(
            f"eigenvalue {self.nearest:.12g} within forbidden distance of probe {self.probe:.12g}")


class SingularSandwichError(ProjdiffError):
    """I + V0*T0(z) is numerically singular (condition number too large)."""

    def __init__(self, cond):
        self.cond = float(cond)
        super().__init__(f"I + V0 T0 has condition number {self.cond:.3e}")


class OverflowGuardError(ProjdiffError):
    """Semigroup exponent would overflow on a mode the input actually excites."""

    def __init__(self, exponent):
        self.exponent = float(exponent)
        super().__init__(f"growing semigroup mode with exponent {self.exponent:.3e} > 700")


class KernelSingularityError(ProjdiffError):
    """Hankel kernel evaluated to a non-finite value at a sampled point."""


class DecayBoundError(ProjdiffError):
    """Sampled potential violates its declared decay envelope."""


class DivergentBoundError(ProjdiffError):
    """Discrete trace-bound integral does not converge at the lower end of the rule."""

    def __init__(self, message):
        super().__init__(message)


class ConfigError(ProjdiffError):
    """Invalid experiment configuration; message carries the field path."""
