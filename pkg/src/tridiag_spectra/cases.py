"""The twelve potential/basis pairings that admit a tridiagonal representation.

Each case stores only its physical parameters.  Potentials that are tied to
the basis scale take ``lam`` as an argument; :meth:`potential` returns a
vectorised callable ``V(r)`` in atomic units.
"""

from dataclasses import dataclass, fields
import math

import numpy as np

from .errors import ParameterDomainError


class PotentialCase:
    """Common behaviour of the case records."""

    tag = ""
    one_dimensional = False
    s_wave_only = False

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None and not math.isfinite(value):
                raise ParameterDomainError(f"{self.tag}: parameter {f.name} must be finite")

    def params(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def potential(self, lam):
        raise NotImplementedError


def _inv_expm1(lam, r):
    # 1/(exp(lam r) - 1), finite for r > 0
    with np.errstate(divide="ignore", over="ignore"):
        return 1.0 / np.expm1(lam * r)


@dataclass(frozen=True)
class CoulombPlain(PotentialCase):
    """``V = Z/r``."""

    Z: float
    tag = "coulomb1"

    def potential(self, lam=None):
        return lambda r: self.Z / r


@dataclass(frozen=True)
class CoulombBarrier(PotentialCase):
    """``V = Z/r + B/r**2``."""

    Z: float
    B: float = 0.0
    tag = "coulomb2"

    def potential(self, lam=None):
        return lambda r: self.Z / r + self.B / r ** 2


@dataclass(frozen=True)
class Oscillator(PotentialCase):
    """``V = omega**2 r**2 / 2`` with ``omega`` the physical frequency."""

    omega: float
    tag = "oscillator1"

    def __post_init__(self):
        super().__post_init__()
        if not self.omega > 0:
            raise ParameterDomainError(f"oscillator frequency must be positive, got {self.omega}")

    def potential(self, lam=None):
        return lambda r: 0.5 * self.omega ** 2 * r ** 2


@dataclass(frozen=True)
class OscillatorBarrier(PotentialCase):
    """``V = lam**4 r**2 / 2 + B/r**2`` (the frequency is tied to the basis scale)."""

    B: float = 0.0
    tag = "oscillator2"

    def potential(self, lam):
        return lambda r: 0.5 * lam ** 4 * r ** 2 + self.B / r ** 2


@dataclass(frozen=True)
class PowerLaw1(PotentialCase):
    """``V = (lam r)**-2 [A (lam r)**mu + B (lam r)**(2 mu) / 2]`` at zero energy."""

    mu: float
    A: float
    B: float
    tag = "powerlaw1"

    def __post_init__(self):
        super().__post_init__()
        _check_power(self.mu)

    def potential(self, lam):
        mu, A, B = self.mu, self.A, self.B
        return lambda r: (A * (lam * r) ** mu + 0.5 * B * (lam * r) ** (2 * mu)) / (lam * r) ** 2


@dataclass(frozen=True)
class PowerLaw2(PotentialCase):
    """``V = (lam r)**-2 [A + B (lam r)**mu / 2 + (mu lam / 2)**2 (lam r)**(2 mu) / 2]``."""

    mu: float
    A: float
    B: float
    tag = "powerlaw2"

    def __post_init__(self):
        super().__post_init__()
        _check_power(self.mu)

    def potential(self, lam):
        mu, A, B = self.mu, self.A, self.B
        c = 0.5 * (mu * lam / 2) ** 2
        return lambda r: (A + 0.5 * B * (lam * r) ** mu + c * (lam * r) ** (2 * mu)) / (lam * r) ** 2


def _check_power(mu):
    if mu in (0, 1, 2):
        raise ParameterDomainError(f"power-law cases exclude mu in {{0, 1, 2}}, got {mu}")


def hulthen_c(lam, nu):
    """Strength ``C`` of the ``1/(e^{lam r} - 1)**2`` term tied to the basis index ``nu``."""
    return lam ** 2 * (nu ** 2 - 1) / 8


@dataclass(frozen=True)
class Hulthen1(PotentialCase):
    """``V = C u**2 + A u + B exp(-lam r)`` with ``u = 1/(exp(lam r) - 1)``."""

    A: float
    B: float
    nu: float
    tag = "hulthen1"
    s_wave_only = True

    def __post_init__(self):
        super().__post_init__()
        if not self.nu > -1:
            raise ParameterDomainError(f"hulthen1 needs nu > -1, got {self.nu}")

    def potential(self, lam):
        C = hulthen_c(lam, self.nu)

        def V(r):
            u = _inv_expm1(lam, r)
            return C * u ** 2 + self.A * u + self.B * np.exp(-lam * r)

        return V


@dataclass(frozen=True)
class Hulthen2(PotentialCase):
    """``V = A u + B exp(lam r) u**2`` with ``u = 1/(exp(lam r) - 1)``."""

    A: float
    B: float
    tag = "hulthen2"
    s_wave_only = True

    def potential(self, lam):
        def V(r):
            u = _inv_expm1(lam, r)
            # exp(lam r) u**2 = u (1 + u)
            return self.A * u + self.B * u * (1 + u)

        return V


@dataclass(frozen=True)
class Hulthen3(PotentialCase):
    """``V = C u**2 + A u + B exp(lam r) u`` with ``u = 1/(exp(lam r) - 1)``."""

    A: float
    B: float
    nu: float
    tag = "hulthen3"
    s_wave_only = True

    def __post_init__(self):
        super().__post_init__()
        if not self.nu > -1:
            raise ParameterDomainError(f"hulthen3 needs nu > -1, got {self.nu}")

    def potential(self, lam):
        C = hulthen_c(lam, self.nu)

        def V(r):
            u = _inv_expm1(lam, r)
            return C * u ** 2 + self.A * u + self.B * (1 + u)

        return V


@dataclass(frozen=True)
class Morse1(PotentialCase):
    """``V = mu_hat A exp(-lam r) + mu_hat**2 B exp(-2 lam r)`` on the real line."""

    A: float
    B: float
    mu_hat: float = 1.0
    tag = "morse1"
    one_dimensional = True

    def __post_init__(self):
        super().__post_init__()
        if not self.mu_hat > 0:
            raise ParameterDomainError(f"morse needs mu_hat > 0, got {self.mu_hat}")

    def potential(self, lam):
        def V(r):
            e = self.mu_hat * np.exp(-lam * r)
            return self.A * e + self.B * e ** 2

        return V


@dataclass(frozen=True)
class Morse2(PotentialCase):
    """``V = mu_hat A exp(-lam r) + (mu_hat lam / 2)**2 exp(-2 lam r) / 2``."""

    A: float
    mu_hat: float = 1.0
    tag = "morse2"
    one_dimensional = True

    def __post_init__(self):
        super().__post_init__()
        if not self.mu_hat > 0:
            raise ParameterDomainError(f"morse needs mu_hat > 0, got {self.mu_hat}")

    def potential(self, lam):
        def V(r):
            e = self.mu_hat * np.exp(-lam * r)
            return self.A * e + 0.5 * (lam / 2) ** 2 * e ** 2

        return V


@dataclass(frozen=True)
class RosenMorse(PotentialCase):
    """``V = C tanh + A sech**2 + (B/2) sech**2 (1 + tanh)`` of ``lam r``.

    ``C = (lam mu/2)**2 - (lam nu/2)**2`` ties the potential to the basis indices.
    """

    A: float
    B: float
    mu: float
    nu: float
    tag = "rosenmorse"
    one_dimensional = True

    def __post_init__(self):
        super().__post_init__()
        if not (self.mu > 0 and self.nu > 0):
            raise ParameterDomainError(
                f"rosen-morse needs mu > 0 and nu > 0, got ({self.mu}, {self.nu})")

    def coupling(self, lam):
        return (lam * self.mu / 2) ** 2 - (lam * self.nu / 2) ** 2

    def potential(self, lam):
        C = self.coupling(lam)

        def V(r):
            t = np.tanh(lam * r)
            e = np.exp(-2 * np.abs(lam * r))
            sech2 = 4 * e / (1 + e) ** 2
            return C * t + self.A * sech2 + 0.5 * self.B * sech2 * (1 + t)

        return V


CASES = {
    cls.tag: cls for cls in (
        CoulombPlain, CoulombBarrier, Oscillator, OscillatorBarrier, PowerLaw1, PowerLaw2,
        Hulthen1, Hulthen2, Hulthen3, Morse1, Morse2, RosenMorse)
}
