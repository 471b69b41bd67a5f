"""Canonical JSON input/output for the command line.

All loaders take already-parsed JSON values (dicts/lists) and build the
library objects; `dumps` renders any report payload byte-identically
(sorted keys, compact separators, tuples/sets/numpy scalars flattened to
plain JSON values).  `digest` hashes input files so every report can
embed exactly what it was computed from.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from . import catalog
from .finring import FiniteModule, FiniteRing, ModuleMap
from .etale import FiniteEtaleSpace
from .groupcoh import GroupTower
from .groups import FiniteGroup, GroupHom, group_from_permutations
from .repv import RepClass
from .tower import SpaceTower, TowerMap


def plain(value):
    """Recursively convert a report payload to JSON-serializable data."""
    if isinstance(value, dict):
        return {_key(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(plain(v) for v in value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, RepClass):
        return {
            "representative": list(value.representative),
            "orbit_size": value.orbit_size,
            "image_rank": value.image_rank,
            "centralizer": sorted(value.centralizer),
            "weyl": plain(value.weyl),
        }
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    raise TypeError(f"cannot render {type(value).__name__} as JSON")


def _key(k):
    if isinstance(k, str):
        return k
    if isinstance(k, (int, np.integer)):
        return str(int(k))
    if isinstance(k, tuple):
        return ",".join(str(x) for x in k)
    return str(k)


def dumps(payload) -> str:
    return json.dumps(plain(payload), sort_keys=True,
                      separators=(",", ":"))


def digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


# -- modules and maps ---------------------------------------------------------


def load_module(data: dict) -> FiniteModule:
    """{"m": 12, "factors": [2, 6]}"""
    return FiniteModule(FiniteRing(int(data["m"])),
                        tuple(int(d) for d in data["factors"]))


def load_map(data: dict) -> ModuleMap:
    """{"source": <module>, "target": <module>, "matrix": [[...]]}"""
    src = load_module(data["source"])
    dst = load_module(data["target"])
    return ModuleMap(src, dst, [[int(x) for x in row]
                                for row in data["matrix"]])


# -- etale spaces and space towers --------------------------------------------


def load_space(data: dict) -> FiniteEtaleSpace:
    """{"base": ["a", "b"], "fibers": {"a": <module>, ...}}"""
    base = [str(t) for t in data["base"]]
    fibers = {str(t): load_module(m) for t, m in data["fibers"].items()}
    return FiniteEtaleSpace(base, fibers)


def load_space_tower(data: dict) -> SpaceTower:
    """{"levels": [["a"], ["a0","a1"]], "transitions": [{"a0":"a",...}]}"""
    levels = [[str(t) for t in lv] for lv in data["levels"]]
    transitions = [{str(s): str(t) for s, t in tr.items()}
                   for tr in data["transitions"]]
    return SpaceTower(levels, transitions)


def load_tower_map(data: dict) -> TowerMap:
    """{"source": <tower>, "target": <tower>, "level_maps": [{...}]}"""
    src = load_space_tower(data["source"])
    dst = load_space_tower(data["target"])
    level_maps = [{str(s): str(t) for s, t in lm.items()}
                  for lm in data["level_maps"]]
    return TowerMap(src, dst, level_maps)


# -- groups, homomorphisms, group towers --------------------------------------


def load_group(data: dict) -> FiniteGroup:
    """Accepts {"perm_generators": [[2,1,3], ...]} (1-based one-line
    images), {"table": [[...]]} or {"catalog": "S4"}."""
    if "perm_generators" in data:
        gens = [tuple(int(i) - 1 for i in g) for g in data["perm_generators"]]
        return group_from_permutations(gens)
    if "table" in data:
        return FiniteGroup(np.array(data["table"], dtype=np.int64),
                           name=data.get("name"))
    if "catalog" in data:
        return catalog.by_name(str(data["catalog"]))
    raise ValueError("group JSON needs perm_generators, table or catalog")


def load_group_hom(data: dict) -> GroupHom:
    """{"source": <group>, "target": <group>, "images": [j0, j1, ...]}"""
    src = load_group(data["source"])
    dst = load_group(data["target"])
    return GroupHom(src, dst, [int(j) for j in data["images"]])


def load_group_tower(data: dict) -> GroupTower:
    """{"levels": [<group>, ...], "transitions": [[j0, j1, ...], ...]}

    Transition k lists, per element of level k+1, its image in level k.
    """
    levels = [load_group(g) for g in data["levels"]]
    transitions = [GroupHom(levels[k + 1], levels[k],
                            [int(j) for j in images])
                   for k, images in enumerate(data["transitions"])]
    return GroupTower(levels, transitions)


def load_thread(data) -> tuple:
    return tuple(int(x) for x in data)
