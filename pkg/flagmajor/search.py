"""Exhaustive search for perfect Hilbertian bases, and the alpha existence scan.

A perfect Hilbertian basis of G(r, p, n) must consist of elements whose orders
are the q-integer factors of the Hilbert series, in some order. The search
walks ordered tuples of such elements depth first, in group enumeration
order, and abandons a prefix as soon as two of its partial products
a_1^{k_1} ... a_j^{k_j} coincide. Candidates are tested against the quotient
set P^-1 P of the prefix products P, and one generator stands for its whole
cyclic subgroup.
"""

import itertools
import logging
import time
from concurrent.futures import Future, ProcessPoolExecutor
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from flagmajor.basis import Basis, FailureWitness, select_alpha, validate_basis
from flagmajor.colored import ColoredPerm, GroupSpec, compose, enumerate_group, format_element
from flagmajor.errors import ConsistencyError, UnsupportedParameters
from flagmajor.polynomial import q_integer_factorization
from flagmajor.stats import hilbert_polynomial

logger = logging.getLogger(__name__)

# Groups larger than this need SearchLimits(long_running=True).
QUICK_SEARCH_ORDER = 500

SCOPE = "ordered tuples whose element orders match the Hilbert series factors"


class SearchLimits:
    """Caps applied to a search.

    Attributes:
        max_candidates: Stop after examining this many candidates (None: no cap).
        time_limit: Stop after this many seconds (None: no limit).
        workers: Number of worker processes; 1 searches in-process.
        long_running: Allow groups larger than QUICK_SEARCH_ORDER.
    """

    def __init__(
        self,
        max_candidates: Optional[int] = None,
        time_limit: Optional[float] = None,
        workers: int = 1,
        long_running: bool = False,
    ) -> None:
        if workers < 1:
            raise UnsupportedParameters(f"workers must be positive, got {workers}")
        self.max_candidates: Optional[int] = max_candidates
        self.time_limit: Optional[float] = time_limit
        self.workers: int = workers
        self.long_running: bool = long_running


class SearchOutcome:
    """Result of search_perfect_hilbertian.

    Attributes:
        spec: The group searched.
        orders: The required orders, ascending.
        orderings: The distinct orderings searched.
        found: The first basis found, if any.
        candidates: Number of candidates examined.
        exhausted: True if the whole space was searched without success.
        stop_reason: ``"max-candidates"`` or ``"time-limit"`` when a cap ended the search.
        elapsed: Wall time in seconds.
    """

    def __init__(
        self,
        spec: GroupSpec,
        orders: List[int],
        orderings: List[Tuple[int, ...]],
        found: Optional[Basis],
        candidates: int,
        exhausted: bool,
        stop_reason: Optional[str] = None,
        elapsed: float = 0.0,
    ) -> None:
        self.spec: GroupSpec = spec
        self.orders: List[int] = orders
        self.orderings: List[Tuple[int, ...]] = orderings
        self.found: Optional[Basis] = found
        self.candidates: int = candidates
        self.exhausted: bool = exhausted
        self.stop_reason: Optional[str] = stop_reason
        self.elapsed: float = elapsed

    def to_dict(self, timings: bool = False) -> Dict[str, object]:
        record: Dict[str, object] = {
            "group": self.spec.label,
            "order": self.spec.order,
            "required_orders": list(self.orders),
            "orderings": [list(o) for o in self.orderings],
            "candidates_examined": self.candidates,
            "exhausted": self.exhausted,
            "stop_reason": self.stop_reason,
            "result": None if self.found is None else self.found.to_record(),
            "scope": SCOPE,
        }
        if timings:
            record["elapsed"] = round(self.elapsed, 6)
        return record

    def __repr__(self) -> str:
        status = "found" if self.found else ("exhausted" if self.exhausted else "stopped")
        return f"SearchOutcome({self.spec.label}, {status}, candidates={self.candidates})"


def required_orders(spec: GroupSpec) -> Tuple[List[int], List[Tuple[int, ...]]]:
    """The q-integer factors of the Hilbert series and their distinct orderings.

    Returns:
        (ascending factor list, lexicographically sorted distinct orderings).

    Raises:
        ConsistencyError: If the Hilbert series does not factor.
    """
    factors = q_integer_factorization(hilbert_polynomial(spec))
    if factors is None:
        raise ConsistencyError(f"the Hilbert series of {spec.label} has no q-integer factorization")
    orderings = sorted(set(itertools.permutations(factors)))
    return factors, orderings


class _GroupIndex:
    """Integer-indexed view of one group for the search.

    Elements are numbered in enumeration order. Each element carries its list
    of powers, and the cyclic subgroup it generates is keyed by the set of
    those powers. Multiplication rows are built on first use.
    """

    def __init__(self, spec: GroupSpec) -> None:
        self.spec: GroupSpec = spec
        self.elements: List[ColoredPerm] = enumerate_group(spec)
        self.position: Dict[ColoredPerm, int] = {g: i for i, g in enumerate(self.elements)}
        self.identity: int = self.position[ColoredPerm.identity(spec.n, spec.r)]
        self.powers: List[List[int]] = []
        self.subgroup: List[FrozenSet[int]] = []
        self.by_order: Dict[int, List[int]] = {}
        for i, g in enumerate(self.elements):
            powers = [self.identity]
            x = g
            while not x.is_identity():
                powers.append(self.position[x])
                x = compose(x, g)
            self.powers.append(powers)
            self.subgroup.append(frozenset(powers))
            self.by_order.setdefault(len(powers), []).append(i)
        self._left: Dict[int, List[int]] = {}
        self._right: Dict[int, List[int]] = {}

    def left_row(self, g: int) -> List[int]:
        """[g x for x in the group]."""
        row = self._left.get(g)
        if row is None:
            element = self.elements[g]
            row = [self.position[compose(element, x)] for x in self.elements]
            self._left[g] = row
        return row

    def right_row(self, g: int) -> List[int]:
        """[x g for x in the group]."""
        row = self._right.get(g)
        if row is None:
            element = self.elements[g]
            row = [self.position[compose(x, element)] for x in self.elements]
            self._right[g] = row
        return row

    def collides(self, quotients: Set[int], a: int) -> bool:
        """True if some nontrivial power of a is a quotient x^-1 y of the prefix."""
        return any(k in quotients for k in self.powers[a][1:])

    def extend(self, quotients: Set[int], a: int) -> Set[int]:
        """The quotient set of P<a> from the quotient set of P.

        (P<a>)^-1 P<a> = <a> (P^-1 P) <a>, and <a> is closed under inverses.
        """
        middle: Set[int] = set()
        for k in self.powers[a]:
            row = self.right_row(k)
            middle.update(row[u] for u in quotients)
        result: Set[int] = set()
        for k in self.powers[a]:
            row = self.left_row(k)
            result.update(row[v] for v in middle)
        return result


_INDEX: Optional[_GroupIndex] = None


def _group_index(spec: GroupSpec) -> _GroupIndex:
    """The index of the most recently searched group, rebuilt when the group changes."""
    global _INDEX
    if _INDEX is None or _INDEX.spec != spec:
        _INDEX = _GroupIndex(spec)
    return _INDEX


class _BranchSearch:
    """Depth-first search below one fixed first element.

    A prefix a_1 ... a_j is kept as the set Q = P^-1 P of quotients of its
    partial products P. The products P<a> repeat exactly when a nontrivial
    power of a lies in Q, so generators of the same cyclic subgroup share a
    verdict and a subtree; the subtree is searched once per subgroup and its
    candidate count is credited to every generator.
    """

    def __init__(
        self,
        index: _GroupIndex,
        ordering: Tuple[int, ...],
        cap: Optional[int],
        deadline: Optional[float],
    ) -> None:
        self.index = index
        self.ordering = ordering
        self.cap = cap
        self.deadline = deadline
        self.count = 0
        self.stopped: Optional[str] = None

    def _admit(self, weight: int = 1) -> bool:
        if self.cap is not None and self.count + weight > self.cap:
            self.count = self.cap
            self.stopped = "max-candidates"
            return False
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.stopped = "time-limit"
            return False
        self.count += weight
        return True

    def run(self, first: int) -> Optional[List[int]]:
        if not self._admit():
            return None
        quotients = self.index.extend({self.index.identity}, first)
        return self._dfs(1, quotients, [first])

    def _dfs(self, depth: int, quotients: Set[int], chosen: List[int]) -> Optional[List[int]]:
        if depth == len(self.ordering):
            return chosen
        last = depth == len(self.ordering) - 1
        credited: Dict[FrozenSet[int], int] = {}
        for a in self.index.by_order.get(self.ordering[depth], []):
            key = self.index.subgroup[a]
            weight = credited.get(key)
            if weight is not None:
                if not self._admit(weight):
                    return None
                continue
            before = self.count
            if not self._admit():
                return None
            if not self.index.collides(quotients, a):
                if last:
                    return chosen + [a]
                result = self._dfs(depth + 1, self.index.extend(quotients, a), chosen + [a])
                if result is not None or self.stopped:
                    return result
            credited[key] = self.count - before
        return None


BranchResult = Tuple[Optional[List[ColoredPerm]], int, Optional[str]]


def _search_branch(
    params: Tuple[int, int, int],
    ordering: Tuple[int, ...],
    first: int,
    cap: Optional[int],
    deadline: Optional[float],
) -> BranchResult:
    index = _group_index(GroupSpec(*params))
    branch = _BranchSearch(index, ordering, cap, deadline)
    found = branch.run(first)
    elements = None if found is None else [index.elements[i] for i in found]
    return elements, branch.count, branch.stopped


def search_perfect_hilbertian(
    spec: GroupSpec, limits: Optional[SearchLimits] = None
) -> SearchOutcome:
    """Search G(r, p, n) for a perfect Hilbertian basis.

    The search space is partitioned by (ordering, first element). First
    elements generating the same cyclic subgroup have identical subtrees, so
    only the first of them is searched and its result is reused. With several
    workers the branches run in a process pool, submitted a few at a time;
    branch results are merged in the same global order as the sequential
    search, so the outcome and the candidate count do not depend on the
    number of workers (unless a time limit cuts the search short).

    Args:
        spec: The group.
        limits: Caps on candidates, time and workers.

    Returns:
        The first basis found in enumeration order, or an exhausted or
        stopped outcome.

    Raises:
        UnsupportedParameters: If the group exceeds QUICK_SEARCH_ORDER and
            long_running is not set.
        ConsistencyError: If a found tuple fails independent validation.
    """
    limits = limits or SearchLimits()
    if spec.order > QUICK_SEARCH_ORDER and not limits.long_running:
        raise UnsupportedParameters(
            f"{spec.label} has {spec.order} elements; searches above "
            f"{QUICK_SEARCH_ORDER} need the long-running flag"
        )
    start = time.perf_counter()
    orders, orderings = required_orders(spec)
    deadline = None if limits.time_limit is None else time.monotonic() + limits.time_limit
    logger.info("Searching %s for orders %s (%d orderings)", spec.label, orders, len(orderings))

    if orderings == [()]:
        basis = Basis([], [], f"search({spec.label})", spec, True)
        return SearchOutcome(spec, orders, orderings, basis, 0, False, None, time.perf_counter() - start)

    index = _group_index(spec)
    tasks: List[Tuple[Tuple[int, ...], int, Tuple[Tuple[int, ...], FrozenSet[int]]]] = [
        (ordering, first, (ordering, index.subgroup[first]))
        for ordering in orderings
        for first in index.by_order.get(ordering[0], [])
    ]
    representatives: List[Tuple[Tuple[int, ...], int, Tuple[Tuple[int, ...], FrozenSet[int]]]] = []
    seen_keys: Set[Tuple[Tuple[int, ...], FrozenSet[int]]] = set()
    for task in tasks:
        if task[2] not in seen_keys:
            seen_keys.add(task[2])
            representatives.append(task)
    params = (spec.r, spec.p, spec.n)
    cap = limits.max_candidates

    total = 0
    found: Optional[List[ColoredPerm]] = None
    found_ordering: Optional[Tuple[int, ...]] = None
    stop_reason: Optional[str] = None
    results: Dict[Tuple[Tuple[int, ...], FrozenSet[int]], BranchResult] = {}

    def absorb(result: BranchResult, ordering: Tuple[int, ...]) -> bool:
        nonlocal total, found, found_ordering, stop_reason
        branch_found, count, stopped = result
        if cap is not None and total + count > cap:
            total = cap
            stop_reason = "max-candidates"
            return True
        total += count
        if branch_found is not None:
            found, found_ordering = branch_found, ordering
            return True
        if stopped is not None:
            stop_reason = stopped
            return True
        return False

    if limits.workers == 1:
        for ordering, first, key in tasks:
            result = results.get(key)
            if result is None:
                remaining = None if cap is None else cap - total
                result = _search_branch(params, ordering, first, remaining, deadline)
                results[key] = result
            if absorb(result, ordering):
                break
    else:
        window = 4 * limits.workers
        with ProcessPoolExecutor(max_workers=limits.workers) as pool:
            queue = iter(representatives)
            futures: Dict[Tuple[Tuple[int, ...], FrozenSet[int]], "Future[BranchResult]"] = {}

            def top_up() -> None:
                while len(futures) < window:
                    task = next(queue, None)
                    if task is None:
                        return
                    futures[task[2]] = pool.submit(_search_branch, params, task[0], task[1], cap, deadline)

            for ordering, first, key in tasks:
                result = results.get(key)
                if result is None:
                    top_up()
                    result = futures.pop(key).result()
                    results[key] = result
                if absorb(result, ordering):
                    for pending in futures.values():
                        pending.cancel()
                    break

    basis = None
    if found is not None:
        assert found_ordering is not None
        basis = Basis(found, list(found_ordering), f"search({spec.label})", spec, True)
        check = validate_basis(basis)
        if isinstance(check, FailureWitness):
            raise ConsistencyError(
                f"search accepted a tuple that is not a basis: {check.message}",
                {"elements": ", ".join(format_element(a) for a in found)},
            )
        logger.info("Found basis %s after %d candidates", [format_element(a) for a in found], total)
    exhausted = found is None and stop_reason is None
    return SearchOutcome(
        spec, orders, orderings, basis, total, exhausted, stop_reason, time.perf_counter() - start
    )



class AlphaCell:
    """One row of the alpha scan.

    Attributes:
        spec: The group G(r, p, n).
        gcd: gcd(n, p, r/p).
        alpha: The smallest valid alpha, or None.
    """

    def __init__(self, spec: GroupSpec, gcd: int, alpha: Optional[int]) -> None:
        self.spec: GroupSpec = spec
        self.gcd: int = gcd
        self.alpha: Optional[int] = alpha

    def to_dict(self) -> Dict[str, object]:
        return {"r": self.spec.r, "p": self.spec.p, "n": self.spec.n, "gcd": self.gcd, "alpha": self.alpha}

    def __repr__(self) -> str:
        return f"AlphaCell({self.spec.label}, gcd={self.gcd}, alpha={self.alpha})"


def alpha_scan(r_max: int, n_max: int) -> List[AlphaCell]:
    """Run select_alpha on every G(r, p, n) with r <= r_max, p | r, n <= n_max.

    Raises:
        UnsupportedParameters: If a bound is below 1.
        ConsistencyError: If some cell with gcd(n, p, r/p) = 1 has no alpha.
    """
    if r_max < 1 or n_max < 1:
        raise UnsupportedParameters("scan bounds must be at least 1")
    cells = []
    for r in range(1, r_max + 1):
        for p in (d for d in range(1, r + 1) if r % d == 0):
            for n in range(1, n_max + 1):
                spec = GroupSpec(r, p, n)
                cell = AlphaCell(spec, spec.gcd_flag, select_alpha(spec))
                if cell.gcd == 1 and cell.alpha is None:
                    raise ConsistencyError(f"no alpha for {spec.label} although gcd is 1")
                cells.append(cell)
    logger.debug("Alpha scan covered %d cells", len(cells))
    return cells
