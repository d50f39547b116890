"""Statistical-thermodynamic entropies in natural-log units scaled by ``k``.

The mixing model is a hard-core lattice gas: at most one particle per site,
two compartments joined by removing a barrier.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import UsageError, ValidationError

# SI values (exact since the 2019 redefinition, except the atomic mass unit)
PLANCK = 6.62607015e-34  # J s
BOLTZMANN = 1.380649e-23  # J / K
AVOGADRO = 6.02214076e23  # 1 / mol
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
HELIUM4_MASS = 4.002602 * ATOMIC_MASS_UNIT
#: Ideal-gas number density at 273.15 K and 101.325 kPa, 1 / m^3.
LOSCHMIDT = 101325.0 / (BOLTZMANN * 273.15)

MAX_UNIFORM_TERMS = 10**6
EXACT_SITE_LIMIT = 64


@dataclass(frozen=True)
class ThermoConfig:
    """Entropy unit ``k`` (per nat) and Planck constant ``h``.

    The default ``k = 1`` gives dimensionless entropies in nats; use
    :meth:`si` for J/K.
    """

    k: float = 1.0
    h: float = PLANCK

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValidationError(f"k must be positive, got {self.k!r}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValidationError(f"h must be positive, got {self.h!r}")

    @classmethod
    def si(cls) -> ThermoConfig:
        return cls(k=BOLTZMANN, h=PLANCK)

    @classmethod
    def from_dict(cls, doc: dict) -> ThermoConfig:
        unknown = set(doc) - {"k", "h"}
        if unknown:
            raise ValidationError(f"unknown ThermoConfig keys: {sorted(unknown)}")
        return cls(**{key: float(v) for key, v in doc.items()})

    @classmethod
    def load(cls, path) -> ThermoConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {"k": self.k, "h": self.h}


DEFAULT = ThermoConfig()


@dataclass(frozen=True)
class LatticeScenario:
    sites_a: int
    sites_b: int
    particles_a: int
    particles_b: int
    same_species: bool = False

    def __post_init__(self):
        if self.sites_a < 1 or self.sites_b < 1:
            raise ValidationError("each compartment needs at least one site")
        if self.particles_a < 0 or self.particles_b < 0:
            raise ValidationError("particle counts must be nonnegative")
        if self.particles_a > self.sites_a or self.particles_b > self.sites_b:
            raise ValidationError("more particles than sites in a compartment")

    @property
    def sites(self) -> int:
        return self.sites_a + self.sites_b


def boltzmann_entropy(multiplicity, cfg: ThermoConfig = DEFAULT) -> float:
    """``k ln(multiplicity)``.  Python ints of any size are accepted."""
    if multiplicity < 1:
        raise UsageError(f"multiplicity must be >= 1, got {multiplicity!r}")
    return cfg.k * math.log(multiplicity)


def uniform_equivalence(omega: int, cfg: ThermoConfig = DEFAULT) -> tuple[float, float]:
    """``(k ln omega, -k sum p ln p)`` for the uniform law on ``omega`` states.

    The second value is an explicit sum over all ``omega`` states.
    """
    if omega < 1:
        raise UsageError(f"omega must be >= 1, got {omega!r}")
    if omega > MAX_UNIFORM_TERMS:
        raise UsageError(
            f"omega={omega} is too large to enumerate; use boltzmann_entropy instead"
        )
    p = 1.0 / omega
    term = -p * math.log(p)
    gibbs = cfg.k * math.fsum(term for _ in range(omega))
    return boltzmann_entropy(omega, cfg), gibbs


def log_binomial(n: int, r: int) -> float:
    """``ln C(n, r)``; exact integers up to 64, log-gamma beyond."""
    if r < 0 or r > n:
        raise UsageError(f"C({n}, {r}) is undefined")
    if n <= EXACT_SITE_LIMIT:
        return math.log(math.comb(n, r))
    return math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)


def mixing_log_multiplicities(s: LatticeScenario) -> tuple[float, float]:
    """``(ln omega_before, ln omega_after)`` for a lattice scenario."""
    before = log_binomial(s.sites_a, s.particles_a) + log_binomial(s.sites_b, s.particles_b)
    if s.same_species:
        after = log_binomial(s.sites, s.particles_a + s.particles_b)
    else:
        after = log_binomial(s.sites, s.particles_a) + log_binomial(
            s.sites - s.particles_a, s.particles_b
        )
    return before, after


def mixing_multiplicities(s: LatticeScenario) -> tuple[int, int]:
    """Exact ``(omega_before, omega_after)`` as Python integers."""
    before = math.comb(s.sites_a, s.particles_a) * math.comb(s.sites_b, s.particles_b)
    if s.same_species:
        after = math.comb(s.sites, s.particles_a + s.particles_b)
    else:
        after = math.comb(s.sites, s.particles_a) * math.comb(
            s.sites - s.particles_a, s.particles_b
        )
    return before, after


def entropy_of_mixing(s: LatticeScenario, cfg: ThermoConfig = DEFAULT) -> float:
    """``k (ln omega_after - ln omega_before)`` when the barrier is removed."""
    if s.sites <= EXACT_SITE_LIMIT:
        before, after = mixing_multiplicities(s)
        if before == after:
            return 0.0
        return cfg.k * (math.log(after) - math.log(before))
    before, after = mixing_log_multiplicities(s)
    return cfg.k * (after - before)


def phase_space_entropy(dp: float, dq: float, d: int, cfg: ThermoConfig = DEFAULT):
    """``k ln((dp dq)^d / h^d)`` and whether ``dp dq < h``.

    Returns ``(entropy, below_uncertainty_floor)``.  The floor used here is
    ``dp dq >= h``, not the Heisenberg ``hbar / 2``.
    """
    if not (dp > 0 and dq > 0):
        raise UsageError("spreads dp and dq must be positive")
    if d < 1:
        raise UsageError("number of degrees of freedom must be >= 1")
    ratio = dp * dq / cfg.h
    return cfg.k * d * math.log(ratio), ratio < 1.0


def thermal_wavelength(temperature: float, mass: float, h: float = PLANCK) -> float:
    return h / math.sqrt(2.0 * math.pi * mass * BOLTZMANN * temperature)


def sackur_tetrode(
    n_particles: float,
    volume: float,
    temperature: float,
    mass: float,
    cfg: ThermoConfig | None = None,
) -> float:
    """Monatomic ideal-gas entropy ``N k [ln(V / (N lambda^3)) + 5/2]``.

    ``cfg`` defaults to SI, giving J/K.  The value goes negative at low
    temperature; that is returned, not rejected.
    """
    cfg = ThermoConfig.si() if cfg is None else cfg
    if min(n_particles, volume, temperature, mass) <= 0:
        raise UsageError("n_particles, volume, temperature and mass must be positive")
    lam = thermal_wavelength(temperature, mass, cfg.h)
    return n_particles * cfg.k * (math.log(volume / (n_particles * lam**3)) + 2.5)


def sackur_tetrode_crossover(number_density: float, mass: float, h: float = PLANCK) -> float:
    """Temperature at which the Sackur-Tetrode entropy is zero at fixed density."""
    if number_density <= 0 or mass <= 0:
        raise UsageError("number density and mass must be positive")
    return h**2 / (2.0 * math.pi * mass * BOLTZMANN) * (number_density * math.exp(-2.5)) ** (2.0 / 3.0)


def sackur_tetrode_sweep(
    temperatures,
    number_density: float = LOSCHMIDT,
    mass: float = HELIUM4_MASS,
    moles: float = 1.0,
    cfg: ThermoConfig | None = None,
) -> list[tuple[float, float]]:
    """``(T, S)`` pairs at fixed particle number and volume."""
    n = moles * AVOGADRO
    volume = n / number_density
    return [(float(t), sackur_tetrode(n, volume, t, mass, cfg)) for t in temperatures]
