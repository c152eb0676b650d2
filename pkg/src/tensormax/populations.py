"""Seeded generation of standardized i.i.d. data matrices.

Every population family is standardized analytically, never empirically:
the centered exponential is Exp(1) - 1, the scaled uniform is
sqrt(3)*U(-1, 1), and the standardized Student t is t_df/sqrt(df/(df-2)).
Each family therefore has exact mean 0 and variance 1.

The Student t family (polynomial tails) deliberately violates the
sub-exponential moment condition under which the ultra-high-dimension
limit theorem holds; it is included so experiments can probe regime
sensitivity, not because the limit law is claimed for it.

Randomness is counter-based: every value stream is a pure function of
(master_seed, stream_id), realized as a Philox generator keyed through a
SeedSequence.  Distinct stream ids give independent streams, and a
generated matrix is byte-identical across runs and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics

STANDARD_NORMAL = "standard_normal"
RADEMACHER = "rademacher"
UNIFORM_SCALED = "uniform_scaled"
CENTERED_EXPONENTIAL = "centered_exponential"
STUDENT_T_STANDARDIZED = "student_t_standardized"

FAMILIES = (
    STANDARD_NORMAL,
    RADEMACHER,
    UNIFORM_SCALED,
    CENTERED_EXPONENTIAL,
    STUDENT_T_STANDARDIZED,
)

_UINT64_MAX = 2**64 - 1
_SQRT3 = math.sqrt(3.0)

ULTRA_HIGH = "ultra_high"
POLYNOMIAL = "polynomial"
OUTSIDE = "outside"


@dataclass(frozen=True)
class SeedSpec:
    """Deterministic stream address: (master_seed, stream_id).

    Both components are 64-bit unsigned integers.  The stream_id is
    conventionally the replicate index, so any replicate can be
    regenerated in isolation.
    """

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) <= _UINT64_MAX:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def to_json(self) -> dict:
        return {"master_seed": int(self.master_seed), "stream_id": int(self.stream_id)}

    @classmethod
    def from_json(cls, obj: dict) -> "SeedSpec":
        return cls(master_seed=int(obj["master_seed"]), stream_id=int(obj.get("stream_id", 0)))


@dataclass(frozen=True)
class PopulationSpec:
    """A standardized population family, plus an optional display label."""

    family: str
    df: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose one of {FAMILIES}")
        if self.family == STUDENT_T_STANDARDIZED:
            if self.df is None or not isinstance(self.df, (int, np.integer)) or self.df <= 2:
                raise ValueError(
                    f"df must be an integer > 2 for {STUDENT_T_STANDARDIZED} "
                    f"(variance undefined otherwise), got {self.df!r}"
                )
        elif self.df is not None:
            raise ValueError(f"df only applies to {STUDENT_T_STANDARDIZED}, got family {self.family!r}")
        if not self.label:
            text = self.family if self.df is None else f"{self.family}(df={self.df})"
            object.__setattr__(self, "label", text)

    def to_json(self) -> dict:
        out: dict = {"family": self.family}
        if self.df is not None:
            out["df"] = int(self.df)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PopulationSpec":
        df = obj.get("df")
        return cls(family=obj["family"], df=None if df is None else int(df))


@dataclass(frozen=True)
class AssumptionProfile:
    """Moment-condition exponents and the regime thresholds they induce.

    alpha in (0, 1] is the sub-exponential exponent of the ultra-high
    dimension condition E exp(t0 |x|^alpha) < infinity; the same alpha
    doubles as the polynomial growth exponent p = O(n^alpha).  The
    derived quantities depend on the tensor order m:

        beta = alpha / (2m - alpha)
        tau1 = 4*m*alpha + 2
        tau2 = 2*m*alpha + 3/2
    """

    alpha: float = 1.0
    t0: float = 1.0
    m: int = 2
    beta: float = field(init=False)
    tau1: float = field(init=False)
    tau2: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.t0 <= 0.0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        a, m = float(self.alpha), self.m
        object.__setattr__(self, "beta", a / (2.0 * m - a))
        object.__setattr__(self, "tau1", 4.0 * m * a + 2.0)
        object.__setattr__(self, "tau2", 2.0 * m * a + 1.5)


@dataclass(frozen=True)
class RegimeReport:
    """Advisory classification of (n, p) against the two growth regimes."""

    regime: str
    ultra_high: bool
    polynomial: bool
    alpha: float
    beta: float
    tau1: float
    tau2: float
    log_p: float
    n_pow_beta: float
    n_pow_alpha: float
    c_n: float | None

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "ultra_high": self.ultra_high,
            "polynomial": self.polynomial,
            "alpha": self.alpha,
            "beta": self.beta,
            "tau1": self.tau1,
            "tau2": self.tau2,
            "log_p": self.log_p,
            "n_pow_beta": self.n_pow_beta,
            "n_pow_alpha": self.n_pow_alpha,
            "c_n": self.c_n,
        }


def make_generator(seed: SeedSpec, extra: tuple[int, ...] = ()) -> np.random.Generator:
    """Philox generator keyed purely by (master_seed, stream_id, *extra).

    The optional extra components let estimators shard a stream into
    deterministic sub-streams (for example one per replicate block)
    without ever depending on worker count or scheduling.
    """
    ss = np.random.SeedSequence((int(seed.master_seed), int(seed.stream_id), *map(int, extra)))
    return np.random.Generator(np.random.Philox(ss))


def draw(spec: PopulationSpec, rng: np.random.Generator, shape) -> np.ndarray:
    """Fill an array of the given shape with i.i.d. standardized draws."""
    if spec.family == STANDARD_NORMAL:
        return rng.standard_normal(shape)
    if spec.family == RADEMACHER:
        # int8 draws consume a quarter of the bit stream of the default
        # int64 path and convert exactly to +/-1.0
        bits = rng.integers(0, 2, size=shape, dtype=np.int8)
        return bits.astype(np.float64) * 2.0 - 1.0
    if spec.family == UNIFORM_SCALED:
        return rng.uniform(-_SQRT3, _SQRT3, size=shape)
    if spec.family == CENTERED_EXPONENTIAL:
        return rng.standard_exponential(shape) - 1.0
    if spec.family == STUDENT_T_STANDARDIZED:
        scale = math.sqrt(spec.df / (spec.df - 2.0))
        return rng.standard_t(spec.df, size=shape) / scale
    raise ValueError(f"unknown family {spec.family!r}")  # unreachable after validation


def sample_values(spec: PopulationSpec, shape, seed: SeedSpec) -> np.ndarray:
    """Draw an i.i.d. array of arbitrary shape from one stream."""
    return draw(spec, make_generator(seed), shape)


def sample_matrix(spec: PopulationSpec, n: int, p: int, seed: SeedSpec) -> np.ndarray:
    """Generate an n-by-p data matrix of i.i.d. standardized draws.

    Parameters
    ----------
    spec : PopulationSpec
        Population family.
    n : int
        Number of observations (rows), >= 1.
    p : int
        Number of coordinates (columns), >= 3 so that the downstream
        normalization log(log(p)) is positive.
    seed : SeedSpec
        Stream address; fixing it fixes every value in the matrix.

    Returns
    -------
    numpy.ndarray
        C-contiguous float64 array of shape (n, p), filled in row-major
        order from a single stream.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    if not isinstance(p, (int, np.integer)) or p < 3:
        raise ValueError(f"p must be an integer >= 3, got {p!r}")
    return sample_values(spec, (int(n), int(p)), seed)


def check_regime(n: int, p: int, m: int, profile: AssumptionProfile | None = None) -> RegimeReport:
    """Classify (n, p, m) against the two asymptotic growth regimes.

    The ultra-high-dimension regime asks log(p) <= n**beta with
    beta = alpha/(2m - alpha); the polynomial regime asks p <= n**alpha.
    The report is advisory only and never blocks a computation: finite
    (n, p) can only ever be checked against the shape of the conditions,
    not their limits.
    """
    if profile is None:
        profile = AssumptionProfile(alpha=1.0, t0=1.0, m=int(m))
    elif profile.m != m:
        raise ValueError(f"profile was built for m={profile.m}, got m={m}")
    if n < 1 or p < 3 or m < 2 or m > p:
        raise ValueError(f"invalid dimensions n={n}, p={p}, m={m}")
    log_p = math.log(p)
    n_pow_beta = float(n) ** profile.beta
    n_pow_alpha = float(n) ** profile.alpha
    ultra = log_p <= n_pow_beta
    poly = float(p) <= n_pow_alpha
    regime = ULTRA_HIGH if ultra else (POLYNOMIAL if poly else OUTSIDE)
    # Threshold growth constant sqrt(2m/log n) * nu_p at z = 0; only
    # defined once p is large enough for nu_p and n > 1 for log n.
    c_n = None
    if n > 1:
        try:
            c_n = math.sqrt(2.0 * m / math.log(n)) * asymptotics.nu_p(0.0, p, m)
        except ValueError:
            c_n = None
    return RegimeReport(
        regime=regime,
        ultra_high=ultra,
        polynomial=poly,
        alpha=profile.alpha,
        beta=profile.beta,
        tau1=profile.tau1,
        tau2=profile.tau2,
        log_p=log_p,
        n_pow_beta=n_pow_beta,
        n_pow_alpha=n_pow_alpha,
        c_n=c_n,
    )
