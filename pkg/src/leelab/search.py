"""Exact-cover search for tilings of Z_q^n by translates of one tile.

Rows are the q^n placements ``tile + c``, columns the q^n cells.  The
engine keeps, per cell, the number of live placements still able to cover
it, always branches on an uncovered cell with the fewest options (lowest
index on ties) and undoes moves exactly, so a run is fully determined by
its inputs.

Two reductions are available and are declared in every certificate:

* ``fix_origin_codeword``: the placement at the origin is forced, which is
  harmless because every tiling has a translate containing 0.
* ``symmetry_reduction``: at the first branching cell x only one candidate
  per orbit of H is tried, where H is the group of signed permutations
  fixing both the tile and x.  H fixes the partial tiling {0} and the
  cell x, so every solution is the image under H of one in a kept branch.
  This is for existence and nonexistence verdicts; full enumeration turns
  it off.
"""
from __future__ import annotations

import json
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from .geometry import Tile, tile_symmetries
from .torus import MAX_CELLS, TorusCode, all_cells, check_projection, ravel

EXISTS = "exists"
NONEXISTENT = "nonexistent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SearchOptions:
    symmetry_reduction: bool = True
    fix_origin_codeword: bool = True
    node_limit: int | None = None
    worker_count: int = 1
    max_solutions: int | None = 1

    def __post_init__(self):
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")
        if self.node_limit is not None and self.node_limit < 0:
            raise ValueError("node_limit must be nonnegative")
        if self.max_solutions is not None and self.max_solutions < 1:
            raise ValueError("max_solutions must be positive or None")

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    branches: int = 0
    automorphisms: int = 1
    complete: bool = True

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class SearchResult:
    verdict: str
    code: TorusCode | None
    codes: list
    stats: SearchStats
    options: SearchOptions
    reductions: dict
    checkpoint: dict | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "code": None if self.code is None else self.code.to_json(),
            "solutions": len(self.codes),
            "stats": self.stats.to_json(),
            "options": self.options.to_json(),
            "reductions": self.reductions,
            "checkpoint": self.checkpoint,
        }


TABLE_BYTES = 3 << 29  # 1.5 GiB of int64 index tables


class TilingProblem:
    """Index tables for the cover problem of Z_q^n by translates of ``tile``."""

    def __init__(self, tile: Tile, q: int):
        self.tile = tile
        self.n = tile.n
        self.q = q
        self.N = q ** self.n
        if self.N > MAX_CELLS:
            raise MemoryError(f"{self.N} cells is beyond the search engine's range")
        offs = check_projection(tile, q)
        self.t = len(tile)
        n_diffs = len(tile.differences())
        need = 8 * self.N * (self.n + 2 * self.t + n_diffs)
        if need > TABLE_BYTES:
            raise MemoryError(f"index tables for Z_{q}^{self.n} need about {need >> 20} MiB "
                              f"(limit {TABLE_BYTES >> 20} MiB)")
        cells = all_cells(q, self.n)
        self.cells = cells
        self.cover = np.stack([ravel(cells + v, q) for v in offs], axis=1)
        self.options = np.stack([ravel(cells - v, q) for v in offs], axis=1)
        diffs = np.unique(np.mod(tile.differences().array(), q), axis=0)
        self.conflict = np.stack([ravel(cells + d, q) for d in diffs], axis=1)
        self._auts = None

    def automorphisms(self) -> list:
        if self._auts is None:
            if self.n <= 7:
                self._auts = tile_symmetries(self.tile)
            else:
                self._auts = [(tuple(range(self.n)), (1,) * self.n)]
        return self._auts

    def orbit_reps(self, candidates: np.ndarray, cell: int) -> np.ndarray:
        """One candidate per orbit of the symmetries fixing both the tile and ``cell``."""
        x = self.cells[cell]
        auts = [(perm, signs) for perm, signs in self.automorphisms()
                if np.array_equal(np.mod(x[list(perm)] * np.asarray(signs), self.q), x)]
        if len(auts) <= 1:
            return candidates
        pts = self.cells[candidates]
        images = []
        for perm, signs in auts:
            img = pts[:, list(perm)] * np.asarray(signs)
            images.append(ravel(img, self.q))
        images = np.stack(images, axis=1)
        kept: list[int] = []
        covered: set = set()
        for row, c in enumerate(candidates.tolist()):
            if c in covered:
                continue
            kept.append(c)
            covered.update(images[row].tolist())
        return np.asarray(kept, dtype=np.int64)


class _State:
    BIG = 1 << 40

    def __init__(self, prob: TilingProblem):
        self.p = prob
        self.alive = np.ones(prob.N, dtype=bool)
        self.count = np.full(prob.N, prob.t, dtype=np.int64)
        self.placed: list[int] = []

    def apply(self, r: int):
        p = self.p
        conf = p.conflict[r]
        killed = conf[self.alive[conf]]
        self.alive[killed] = False
        cells = p.cover[killed].ravel()
        np.subtract.at(self.count, cells, 1)
        self.count[p.cover[r]] += self.BIG
        self.placed.append(r)
        return killed

    def undo(self, r: int, killed):
        p = self.p
        self.placed.pop()
        self.count[p.cover[r]] -= self.BIG
        np.add.at(self.count, p.cover[killed].ravel(), 1)
        self.alive[killed] = True

    def choose(self):
        """(cell, candidates) to branch on; cell None means solved, empty candidates dead."""
        x = int(np.argmin(self.count))
        if self.count[x] >= self.BIG:
            return None, None
        opts = self.p.options[x]
        cands = np.sort(opts[self.alive[opts]])
        return x, cands


class _Frame:
    __slots__ = ("cands", "i", "row", "killed")

    def __init__(self, cands):
        self.cands = cands
        self.i = 0
        self.row = None
        self.killed = None


def _dfs(state: _State, frames: list, budget: int | None, want: int | None,
         nodes: int, found: list, found_at: list) -> tuple[int, bool]:
    """Run the explicit-stack DFS; returns (nodes, finished)."""
    while frames:
        f = frames[-1]
        if f.row is not None:
            state.undo(f.row, f.killed)
            f.row = None
        if f.i >= len(f.cands):
            frames.pop()
            continue
        r = int(f.cands[f.i])
        f.i += 1
        if budget is not None and nodes >= budget:
            f.i -= 1
            return nodes, False
        nodes += 1
        f.killed = state.apply(r)
        f.row = r
        x, cands = state.choose()
        if x is None:
            found.append(sorted(state.placed))
            found_at.append(nodes)
            if want is not None and len(found) >= want:
                return nodes, True
        elif len(cands):
            frames.append(_Frame(cands))
    return nodes, True


def _root(prob: TilingProblem, opts: SearchOptions):
    """Apply the forced origin placement; return (state, nodes, first frame or None, solved)."""
    state = _State(prob)
    nodes = 0
    if opts.fix_origin_codeword:
        state.apply(0)
        nodes = 1
    x, cands = state.choose()
    if x is None:
        return state, nodes, None, True
    if opts.symmetry_reduction and opts.fix_origin_codeword and len(cands):
        cands = prob.orbit_reps(cands, x)
    return state, nodes, cands, False


def _run_branch(args):
    tile_json, q, opts_json, branch, budget = args
    tile = Tile.from_json(tile_json)
    opts = SearchOptions(**opts_json)
    prob = TilingProblem(tile, q)
    state, _, cands, _ = _root(prob, opts)
    frames = [_Frame(cands[branch:branch + 1])]
    found: list = []
    found_at: list = []
    nodes, finished = _dfs(state, frames, budget, opts.max_solutions, 0, found, found_at)
    return nodes, finished, found, found_at


def search_tiling(tile: Tile, n: int, q: int, opts: SearchOptions | None = None,
                  resume: dict | None = None) -> SearchResult:
    """Search for (or exhaust) tilings of Z_q^n by translates of ``tile``.

    Verdicts: ``exists`` with a witness, ``nonexistent`` after full
    exhaustion, ``inconclusive`` when the node limit stops the run (a
    checkpoint is attached; pass it back as ``resume`` to continue, serial
    runs only).
    """
    opts = opts or SearchOptions()
    if tile.n != n:
        raise ValueError(f"tile lives in Z^{tile.n}, not Z^{n}")
    reductions = {
        "fix_origin_codeword": opts.fix_origin_codeword,
        "symmetry_reduction": opts.symmetry_reduction and opts.fix_origin_codeword,
    }
    stats = SearchStats()
    if (q ** n) % len(tile):
        reductions["divisibility"] = f"|V|={len(tile)} does not divide q^n={q ** n}"
        return SearchResult(NONEXISTENT, None, [], stats, opts, reductions)
    prob = TilingProblem(tile, q)
    if reductions["symmetry_reduction"]:
        stats.automorphisms = len(prob.automorphisms())
        reductions["automorphisms"] = stats.automorphisms
    state, nodes, cands, solved = _root(prob, opts)
    found: list = []
    found_at: list = []
    if solved:
        found.append(sorted(state.placed))
        found_at.append(nodes)
        cands = np.zeros(0, dtype=np.int64)
    stats.branches = 0 if cands is None else len(cands)
    want = opts.max_solutions
    finished = True
    checkpoint = None
    if solved or cands is None or not len(cands):
        pass
    elif opts.worker_count > 1 and resume is None:
        nodes, finished, found, found_at = _parallel(tile, q, opts, cands, nodes)
    else:
        frames = [_Frame(cands)]
        budget = opts.node_limit
        if resume is not None:
            nodes, found, found_at = _replay(state, frames, resume)
        nodes, finished = _dfs(state, frames, budget, want, nodes, found, found_at)
        if not finished:
            checkpoint = {
                "path": [f.i - 1 for f in frames],
                "nodes": nodes,
                "solutions": [list(map(int, s)) for s in found],
                "found_at": list(found_at),
            }
    codes = [TorusCode(n, q, prob.cells[s].tolist()) for s in found]
    stats.nodes = nodes
    stats.solutions = len(codes)
    stats.complete = finished
    if codes and want is not None and len(codes) >= want:
        verdict = EXISTS
    elif finished:
        verdict = EXISTS if codes else NONEXISTENT
    else:
        verdict = INCONCLUSIVE
    return SearchResult(verdict, codes[0] if codes else None, codes, stats, opts,
                        reductions, checkpoint)


def _replay(state: _State, frames: list, resume: dict):
    path = resume["path"]
    for depth, i in enumerate(path):
        f = frames[depth]
        if i < 0:
            # frame was pushed but none of its candidates tried yet
            break
        r = int(f.cands[i])
        f.i = i + 1
        f.killed = state.apply(r)
        f.row = r
        if depth + 1 < len(path):
            x, cands = state.choose()
            if x is None or not len(cands):
                raise ValueError("checkpoint does not match this problem")
            frames.append(_Frame(cands))
    return int(resume["nodes"]), [list(s) for s in resume["solutions"]], list(resume["found_at"])


def _parallel(tile: Tile, q: int, opts: SearchOptions, cands, root_nodes: int):
    """Run the top-level branches in worker processes and merge in branch order.

    The merge reproduces the serial node count and solution list exactly.
    """
    tasks = [(tile.to_json(), q, opts.to_json(), b, opts.node_limit) for b in range(len(cands))]
    ctx = mp.get_context("fork")
    with ProcessPoolExecutor(max_workers=opts.worker_count, mp_context=ctx) as pool:
        results = list(pool.map(_run_branch, tasks))
    nodes = root_nodes
    found: list = []
    found_at: list = []
    want = opts.max_solutions
    limit = opts.node_limit
    for b_nodes, b_finished, b_found, b_at in results:
        for sol, at in zip(b_found, b_at):
            if limit is not None and nodes + at > limit:
                return limit, False, found, found_at
            found.append(sol)
            found_at.append(nodes + at)
            if want is not None and len(found) >= want:
                return nodes + at, True, found, found_at
        if limit is not None and (nodes + b_nodes > limit or not b_finished):
            return limit, False, found, found_at
        nodes += b_nodes
    return nodes, True, found, found_at


def certificate(result: SearchResult, tile: Tile, q: int) -> dict:
    """Certificate JSON for a search run."""
    return {
        "claim": f"tiling of Z_{q}^{tile.n} by translates of a {len(tile)}-point tile",
        "method": "exact-cover-exhaustion",
        "parameters": {
            "n": tile.n,
            "q": q,
            "tile": tile.to_json(),
            "options": result.options.to_json(),
            "reductions": result.reductions,
        },
        "verdict": result.verdict,
        "witness": None if result.code is None else result.code.to_json(),
        "nodes": result.stats.nodes,
    }


def dumps(result: SearchResult) -> str:
    return json.dumps(result.to_json(), sort_keys=True)
