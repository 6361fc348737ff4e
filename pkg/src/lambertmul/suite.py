"""Suite runner: seeded trial streams, reports, witnesses, and replay.

Every registered property gets its own deterministic instance stream
derived from ``(suite seed, property id, trial index)``, so properties are
independent of execution order and could run in parallel without changing
any result.  The first trials of every stream force degenerate shapes
(coarse partition, fine partition, single atom, exponents 1, 2, and large)
before random instances take over.

A failing trial records the full instance, including its derived
parameters, as a witness; feeding the witness back through :func:`replay`
reproduces the recorded violation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .algebra import ALGEBRA_IDENTITY, MultiplierContext, induced_norm, multiplier_norm, star
from .expectation import CondExpectation
from .instances import GeneratorConfig, Instance, random_instance
from .measure import INF, Partition, make_space
from .operators import NotInvertibleError, invert_operator, operator_matrix
from .properties import ALL_PROPERTY_IDS, get_property
from .properties import _well_conditioned_symbol  # shared conditioning

__all__ = [
    "DEFAULT_SEED",
    "SuiteConfig",
    "PropertyReport",
    "SuiteReport",
    "instance_for_trial",
    "verify",
    "run_over_instances",
    "run_suite",
    "replay",
    "adversarial_submult_instances",
    "singular_symbol_instances",
]

DEFAULT_SEED = 42

# forced (partition shape, exponent) pairs at the head of every stream
_DEGENERATE_PREFIX = [
    ("coarse", 1.0),
    ("fine", 2.0),
    ("single", 8.0),
    ("coarse", 2.0),
    ("fine", 8.0),
    ("single", 1.0),
]


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration for a verification run."""

    trials: int = 500
    seed: int = DEFAULT_SEED
    tol: float = 1e-9
    max_atoms: int = 16
    max_blocks: int = 6
    stress: bool = False

    def generator_config(self) -> GeneratorConfig:
        if self.stress:
            return GeneratorConfig(max_atoms=64, max_blocks=12)
        return GeneratorConfig(max_atoms=self.max_atoms, max_blocks=self.max_blocks)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "max_atoms": 64 if self.stress else self.max_atoms,
            "max_blocks": 12 if self.stress else self.max_blocks,
            "stress": self.stress,
        }


@dataclass
class PropertyReport:
    """Outcome of one property over its trial stream."""

    id: str
    trials: int
    passed: bool
    max_violation: float
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "trials": self.trials,
            "passed": self.passed,
            "max_violation": self.max_violation,
            "witness": self.witness,
        }


@dataclass
class SuiteReport:
    """Aggregated outcome of a full verification run."""

    seed: int
    tol: float
    config: dict
    reports: list[PropertyReport]
    observations: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "tol": self.tol,
            "config": self.config,
            "reports": [r.to_dict() for r in self.reports],
            "observations": self.observations,
            "wall_time": self.wall_time,
        }


def _trial_seed(seed: int, prop_id: str, trial: int, salt: int = 0) -> int:
    prop_index = ALL_PROPERTY_IDS.index(prop_id) if prop_id in ALL_PROPERTY_IDS else 997
    ss = np.random.SeedSequence([int(seed), prop_index, int(trial), int(salt)])
    return int(ss.generate_state(1)[0])


def _draw_params(rng: np.random.Generator, forced_p: float | None = None) -> dict:
    if forced_p is None:
        roll = rng.random()
        if roll < 0.2:
            p = 1.0
        elif roll < 0.4:
            p = 2.0
        else:
            p = float(np.round(rng.uniform(1.0, 8.0), 3))
    else:
        p = forced_p
    q = float(np.round(p + rng.uniform(0.5, 3.0), 3))
    r = INF if rng.random() < 0.15 else float(np.round(q + rng.uniform(0.5, 3.0), 3))
    lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    return {
        "p": p,
        "q": q,
        "r": r,
        "lam": lam,
        "search_seed": int(rng.integers(0, 2**31 - 1)),
        "sample_seed": int(rng.integers(0, 2**31 - 1)),
    }


def _degenerate_instance(shape: str, p: float, rng: np.random.Generator,
                         cfg: GeneratorConfig) -> Instance:
    if shape == "single" or cfg.max_atoms < 2:
        n = 1
    else:
        n = int(rng.integers(2, cfg.max_atoms + 1))
    raw = rng.lognormal(mean=0.0, sigma=1.0, size=n)
    floor = cfg.weight_floor_ratio * float(raw.mean())
    space = make_space(np.maximum(raw, floor))
    if shape == "fine" and n > 1:
        partition = Partition(n, [[i] for i in range(n)])
    else:
        partition = Partition(n, [range(n)])
    functions = {}
    for name in ("u", "v", "w"):
        mod = cfg.value_scale * rng.random(n)
        phs = rng.uniform(0.0, 2.0 * np.pi, n)
        functions[name] = mod * np.exp(1j * phs)
    params = _draw_params(rng, forced_p=p)
    return Instance(space=space, partition=partition, functions=functions, params=params)


def instance_for_trial(seed: int, prop_id: str, trial: int, cfg: GeneratorConfig) -> Instance:
    """Deterministic instance for one (seed, property, trial) triple."""
    child = _trial_seed(seed, prop_id, trial)
    rng = np.random.default_rng(child)
    if trial < len(_DEGENERATE_PREFIX):
        shape, p = _DEGENERATE_PREFIX[trial]
        return _degenerate_instance(shape, p, rng, cfg)
    space, partition, fns = random_instance(child, cfg)
    params_rng = np.random.default_rng(_trial_seed(seed, prop_id, trial, salt=1))
    return Instance(
        space=space,
        partition=partition,
        functions=dict(zip(("u", "v", "w"), fns)),
        params=_draw_params(params_rng),
    )


def verify(
    prop_id: str,
    trials: int = 500,
    seed: int = DEFAULT_SEED,
    tol: float = 1e-9,
    max_atoms: int = 16,
    max_blocks: int = 6,
    stress: bool = False,
) -> PropertyReport:
    """Run one property over its seeded trial stream."""
    prop = get_property(prop_id)
    cfg = SuiteConfig(
        trials=trials, seed=seed, tol=tol, max_atoms=max_atoms,
        max_blocks=max_blocks, stress=stress,
    ).generator_config()
    worst = -np.inf
    worst_inst: Instance | None = None
    for t in range(int(trials)):
        inst = instance_for_trial(seed, prop_id, t, cfg)
        violation = prop.check(inst, tol)
        if violation > worst:
            worst = float(violation)
            worst_inst = inst
    passed = bool(worst <= tol)
    witness = None
    if not passed and worst_inst is not None:
        witness = worst_inst.to_dict()
    return PropertyReport(
        id=prop_id, trials=int(trials), passed=passed,
        max_violation=float(worst), witness=witness,
    )


def run_over_instances(prop_id: str, instances: Iterable[Instance], tol: float = 1e-9) -> PropertyReport:
    """Run one property over an explicit instance list (adversarial families)."""
    prop = get_property(prop_id)
    worst = -np.inf
    worst_inst = None
    count = 0
    for inst in instances:
        count += 1
        violation = prop.check(inst, tol)
        if violation > worst:
            worst = float(violation)
            worst_inst = inst
    passed = bool(worst <= tol)
    witness = worst_inst.to_dict() if (not passed and worst_inst is not None) else None
    return PropertyReport(id=prop_id, trials=count, passed=passed,
                          max_violation=float(worst), witness=witness)


def _observe_star_variant(config: SuiteConfig, cfg: GeneratorConfig, samples: int = 40) -> dict:
    """Measure the un-rescaled induced-norm variant against the plain norm.

    The induced norm is defined here through the rescaled multiplication
    ``u . v``; the variant that keeps the raw star product in the objective
    is three times larger and routinely exceeds ``||u||0``.  This records
    how often, without failing the suite.
    """
    count = 0
    worst_excess = -np.inf
    example = None
    for t in range(samples):
        inst = instance_for_trial(config.seed, "NORM-EQUIV", t, cfg)
        E = CondExpectation(inst.space, inst.partition)
        ctx = MultiplierContext(inst.space, E, inst.params["p"])
        u = inst.functions["u"]
        est = induced_norm(u, ctx, seed=int(inst.params["search_seed"]))
        star_variant = ALGEBRA_IDENTITY * est.lower_bound
        u0 = multiplier_norm(u, ctx)
        excess = star_variant - u0
        if excess > config.tol * max(u0, 1.0):
            count += 1
            if excess > worst_excess:
                worst_excess = excess
                example = inst.to_dict()
    return {
        "id": "STAR-VARIANT-INDUCED-NORM",
        "note": (
            "with the raw star product in the induced-norm objective the "
            "estimate exceeds ||u||0 on the instances counted here; the "
            "rescaled multiplication keeps it inside the sandwich"
        ),
        "samples": samples,
        "count": count,
        "max_excess": None if count == 0 else float(worst_excess),
        "witness": example,
    }


def _observe_inverse_form(config: SuiteConfig, cfg: GeneratorConfig, samples: int = 40) -> dict:
    """Check that matrix inverses of the operators stay in operator form.

    For every invertible symbol tested, the full matrix inverse is compared
    against the operator built from the recovered symbol; mismatches would
    mean the inverse escapes the symbol calculus.  None are expected.
    """
    count = 0
    worst = -np.inf
    example = None
    for t in range(samples):
        inst = instance_for_trial(config.seed, "INV-EXPECT", t, cfg)
        E = CondExpectation(inst.space, inst.partition)
        ctx = MultiplierContext(inst.space, E, inst.params["p"])
        good = _well_conditioned_symbol(inst.functions["u"], E, ctx)
        try:
            w = invert_operator(good, ctx)
        except NotInvertibleError:
            continue
        inv_matrix = np.linalg.inv(operator_matrix(good, ctx).entries)
        symbol_matrix = operator_matrix(w, ctx).entries
        scale = max(float(np.abs(inv_matrix).max()), 1e-12)
        mismatch = float(np.abs(inv_matrix - symbol_matrix).max()) / scale
        if mismatch > 1e-8:
            count += 1
            if mismatch > worst:
                worst = mismatch
                example = inst.to_dict()
    return {
        "id": "INVERSE-OPERATOR-FORM",
        "note": (
            "matrix inverses of invertible star-multiplication operators are "
            "compared column-by-column against the operator of the recovered "
            "symbol; a nonzero count would mean an inverse left the symbol class"
        ),
        "samples": samples,
        "count": count,
        "max_mismatch": None if count == 0 else float(worst),
        "witness": example,
    }


def run_suite(config: SuiteConfig = SuiteConfig()) -> SuiteReport:
    """Run every registered property plus the observation probes."""
    start = time.perf_counter()
    cfg = config.generator_config()
    reports = [
        verify(
            prop_id,
            trials=config.trials,
            seed=config.seed,
            tol=config.tol,
            max_atoms=config.max_atoms,
            max_blocks=config.max_blocks,
            stress=config.stress,
        )
        for prop_id in ALL_PROPERTY_IDS
    ]
    observations = [
        _observe_star_variant(config, cfg),
        _observe_inverse_form(config, cfg),
    ]
    wall = time.perf_counter() - start
    return SuiteReport(
        seed=config.seed,
        tol=config.tol,
        config=config.to_dict(),
        reports=reports,
        observations=observations,
        wall_time=wall,
    )


def replay(witness: Mapping, prop_id: str, recorded_violation: float, tol: float = 1e-9) -> dict:
    """Re-run a property on a recorded witness instance.

    Returns the reproduced violation and whether it matches the recorded
    one within 1e-12.
    """
    inst = Instance.from_dict(witness)
    prop = get_property(prop_id)
    reproduced = float(prop.check(inst, tol))
    return {
        "id": prop_id,
        "recorded": float(recorded_violation),
        "reproduced": reproduced,
        "match": bool(abs(reproduced - recorded_violation) <= 1e-12),
    }


def adversarial_submult_instances(
    seed: int = DEFAULT_SEED, count: int = 32, constant: float = 3.0
) -> list[Instance]:
    """Two-atom instances driving ||star(u,u)||0 / ||u||0^2 toward 3.

    With one light atom of mass w carrying the whole symbol and exponent 1,
    the ratio is exactly 3 - 2w, so any constant below 3 fails on this
    family for small enough w.  ``constant`` is stored in the instance
    parameters and picked up by the submultiplicativity check.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        w = float(np.exp(rng.uniform(np.log(3e-3), np.log(2e-2))))
        a = float(rng.uniform(0.5, 4.0)) / w
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        u = np.array([a * np.exp(1j * theta), 0.0], dtype=np.complex128)
        space = make_space([w, 1.0 - w])
        partition = Partition(2, [[0, 1]])
        params = {
            "p": 1.0,
            "q": 2.0,
            "r": 3.0,
            "lam": complex(1.0, 0.0),
            "search_seed": int(rng.integers(0, 2**31 - 1)),
            "sample_seed": int(rng.integers(0, 2**31 - 1)),
            "submult_constant": float(constant),
        }
        out.append(Instance(
            space=space, partition=partition,
            functions={"u": u, "v": u.copy(), "w": u.copy()},
            params=params,
        ))
    return out


def singular_symbol_instances(seed: int = DEFAULT_SEED, count: int = 32,
                              cfg: GeneratorConfig = GeneratorConfig()) -> list[Instance]:
    """Instances whose symbol has a vanishing block expectation.

    The symbol is projected to mean zero on one block, which makes the
    operator singular there (on a singleton block the value itself becomes
    zero), so inversion must be refused.
    """
    out = []
    for k in range(count):
        child = _trial_seed(seed, "SINGULAR", k)
        space, partition, fns = random_instance(child, cfg)
        E = CondExpectation(space, partition)
        u = fns[0].copy()
        sizes = [len(b) for b in partition.blocks]
        target = int(np.argmax(sizes))
        atoms = list(partition.blocks[target])
        u[atoms] = u[atoms] - E.apply(u)[atoms]
        params_rng = np.random.default_rng(_trial_seed(seed, "SINGULAR", k, salt=1))
        out.append(Instance(
            space=space, partition=partition,
            functions={"u": u, "v": fns[1], "w": fns[2]},
            params=_draw_params(params_rng),
        ))
    return out
