"""Exception hierarchy. Every library error derives from ThetaForgeError."""


class ThetaForgeError(Exception):
    pass


class TailNotConverged(ThetaForgeError):
    """Series tail bound cannot meet the tolerance within the term budget."""


class PoleAtLatticePoint(ThetaForgeError):
    """theta_1 vanishes (to tolerance) at the requested argument."""


class LatticePole(PoleAtLatticePoint):
    """Argument too close to the period lattice of a Weierstrass function."""


class DegenerateCurve(ThetaForgeError):
    """a^3 = 27 b^2: the cubic has a repeated root."""


class DegeneratePeriods(ThetaForgeError):
    """Period ratio is real, so the lattice collapses."""


class NoConvergence(ThetaForgeError):
    """An iterative solver failed to converge."""


class ConvergenceFailure(NoConvergence):
    pass


class IntegralityViolation(ThetaForgeError):
    """A recurrence cell that must be an integer came out fractional."""


class TruncationTooCoarse(ThetaForgeError):
    """A truncated power series cannot reach the requested accuracy."""


class ZVanishes(ThetaForgeError):
    """Z = zeta - x*eta is zero, so a ratio in the Z-relations is undefined."""


class QuadratureFailed(ThetaForgeError):
    pass


class ZeroDenominator(ThetaForgeError):
    """A multiplication recurrence hit a vanishing theta value."""


class BranchPointProximity(ThetaForgeError):
    """Point too close to x = 0 or x = 1 for the elliptic integrals."""


class PoleTooClose(ThetaForgeError):
    """The candidate solution sits near a singular value of the ODE."""


class PoleHit(ThetaForgeError):
    """A closed-form solution is evaluated on its own pole set."""
