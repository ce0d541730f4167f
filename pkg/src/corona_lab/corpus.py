"""Seeded random subalgebra corona data and scenario-file generation."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bezout import bezout_tuple
from .errors import RejectionBudgetExceeded
from .functions import (DEFAULT_POLE_MARGIN, FnTuple, Poly, SubalgebraTuple,
                        ideal_from_zeros)
from .norms import DiskGrid

__all__ = [
    "CorpusParams", "Instance", "random_unit_disk", "random_ideal",
    "random_subalgebra_tuple", "random_weights", "draw_instance",
    "generate_instances", "instance_scenario", "gen_corpus", "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
IDEAL_RADIUS = 0.9
MIN_SEPARATION = 0.05


@dataclass(frozen=True)
class CorpusParams:
    n_range: tuple = (1, 8)
    degree_range: tuple = (1, 6)
    ideal_size_range: tuple = (1, 3)
    max_multiplicity: int = 2
    margin: float = DEFAULT_POLE_MARGIN
    rejection_budget: int = 200

    def to_json(self):
        return {"n_range": list(self.n_range), "degree_range": list(self.degree_range),
                "ideal_size_range": list(self.ideal_size_range),
                "max_multiplicity": self.max_multiplicity, "margin": self.margin,
                "rejection_budget": self.rejection_budget}


@dataclass(frozen=True)
class Instance:
    F: SubalgebraTuple
    index: int
    seed: int
    rejections: int


def random_unit_disk(rng, size):
    """Complex numbers drawn uniformly from the closed unit disk."""
    return np.sqrt(rng.random(size)) * np.exp(2j * np.pi * rng.random(size))


def random_ideal(rng, size, max_total, max_multiplicity=2):
    """I(Z) with ``size`` distinct zeros in |z| <= 0.9 and total multiplicity <= max_total."""
    size = max(1, min(size, max_total))
    pts = []
    while len(pts) < size:
        z = complex(IDEAL_RADIUS * random_unit_disk(rng, 1)[0])
        if all(abs(z - p) >= MIN_SEPARATION for p in pts):
            pts.append(z)
    mults = [1] * size
    spare = max_total - size
    for k in range(size):
        extra = int(rng.integers(0, min(max_multiplicity - 1, spare) + 1))
        mults[k] += extra
        spare -= extra
    return ideal_from_zeros(list(zip(pts, mults)))


def _subalgebra_polys(rng, n, max_degree, ideal):
    gen = ideal.generator
    qdeg = max(max_degree - gen.degree, 0)
    consts = random_unit_disk(rng, n)
    return [c + gen * Poly(random_unit_disk(rng, qdeg + 1)) for c in consts]


def _normalise(polys):
    s = math.sqrt(sum(p.coeff_sum() ** 2 for p in polys))
    return [p / s for p in polys]


def random_subalgebra_tuple(rng, n, max_degree, ideal):
    """Entries c_j + generator * q_j, rescaled so the coefficient bound on sup FF^* is 1."""
    return FnTuple(tuple(_normalise(_subalgebra_polys(rng, n, max_degree, ideal))))


def random_weights(rng, n, max_degree, ideal):
    """Random subalgebra tuple w with sup ||w(z)|| <= 1 (coefficient bound)."""
    return random_subalgebra_tuple(rng, n, max_degree, ideal)


def _acceptable(F, margin):
    roots = bezout_tuple(F).gcd.roots()
    return not np.any(np.abs(roots) < margin)


def draw_instance(rng, params=CorpusParams(), ideal=None, n=None, max_degree=None):
    """Draw until the tuple has no common zero inside the pole margin.

    Returns ``(SubalgebraTuple, rejections)``.
    """
    for attempt in range(params.rejection_budget + 1):
        deg = max_degree if max_degree is not None else \
            int(rng.integers(params.degree_range[0], params.degree_range[1] + 1))
        size = n if n is not None else \
            int(rng.integers(params.n_range[0], params.n_range[1] + 1))
        I = ideal
        if I is None:
            isize = int(rng.integers(params.ideal_size_range[0],
                                     params.ideal_size_range[1] + 1))
            I = random_ideal(rng, isize, min(params.ideal_size_range[1], deg),
                             params.max_multiplicity)
        F = random_subalgebra_tuple(rng, size, deg, I)
        if _acceptable(F, params.margin):
            return SubalgebraTuple.from_tuple(F, I), attempt
    raise RejectionBudgetExceeded(
        f"no acceptable tuple after {params.rejection_budget + 1} draws")


def instance_rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


def generate_instances(count, seed, params=CorpusParams()):
    out = []
    for k in range(count):
        F, rej = draw_instance(instance_rng(seed, k), params)
        out.append(Instance(F, k, int(seed), rej))
    return out


def instance_scenario(inst, kind="solve-corona", grid=None):
    F = inst.F
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "seed": inst.seed,
        "ideal": F.ideal.to_json(),
        "tuple": F.tuple.to_json(),
        "grid": (grid or DiskGrid()).to_json(),
        "tolerances": {},
        "metadata": {
            "instance_index": inst.index,
            "rejections": inst.rejections,
            "fc_norm_sq": F.fc_norm ** 2,
            "gramian_at_zeros": [float(F.tuple.gramian(z)) for z in F.ideal.points],
        },
    }


def _write_atomic(path, text):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def gen_corpus(out_dir, count, seed, params=CorpusParams(), kind="solve-corona"):
    """Write one scenario file per generated instance; returns the paths."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in generate_instances(count, seed, params):
        scen = instance_scenario(inst, kind)
        scen["metadata"]["generator"] = params.to_json()
        path = out_dir / f"instance_{inst.index:04d}.json"
        _write_atomic(path, json.dumps(scen, indent=1) + "\n")
        paths.append(path)
    return paths

