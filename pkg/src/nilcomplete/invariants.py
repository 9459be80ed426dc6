"""Homological and completion invariants of the torus-bundle groups G_k and E_k.

* ``H_1`` of finite presentations (abelianized relator matrix).
* ``H_2(E_k)`` through the coinvariants of the degree-3 Lie action.
* Baer invariants ``M_n`` of free nilpotent groups from Hopf's formula.
* Inverse towers of abelian groups and a Mittag-Leffler test.
* Concrete models of the completions and explicit gamma_omega witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .freelie import (
    MAX_CLASS,
    ClassBoundError,
    FreeWord,
    basic_commutator_word,
    commutator,
    graded_image,
    left_normed_words,
    lie_functor_matrix,
    lie_span_rank,
    witt_rank,
)
from .intlinalg import AbelianGroupInvariants, IntMatrix, Lattice, cokernel, kernel
from .local_arith import DyadicLocal, DyadicModOne, mod_one
from .nilgroups import (
    DYADIC,
    NSCRIPT,
    HeisenbergElement,
    SemidirectElement,
    SemidirectGroup,
    a_matrix,
    b_matrix,
    heisenberg_extension,
    mod_domain,
    sd_commutator,
    torus_bundle_group,
)


# ---------------------------------------------------------------------------
# presentations and H_1

@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...]

    def relator_matrix(self) -> IntMatrix:
        """Exponent sums: one row per generator, one column per relator."""
        r = len(self.generators)
        cols = [w.exponent_sums(r) for w in self.relators]
        if not cols:
            return IntMatrix.zeros(r, 0)
        return IntMatrix.from_columns(cols, r)


def h1_presentation(P: GroupPresentation) -> AbelianGroupInvariants:
    return cokernel(P.relator_matrix())


def torus_bundle_presentation(k: int) -> GroupPresentation:
    """``G_k = <a, x, y | x^a = x^-1, y^a = x^k y^-1, [x, y] = 1>``."""
    a, x, y = (FreeWord.gen(i) for i in range(3))
    return GroupPresentation(
        ("a", "x", "y"),
        (
            a.inverse() * x * a * x,
            a.inverse() * y * a * y * x ** (-k),
            commutator(x, y),
        ),
    )


def heisenberg_extension_presentation(k: int) -> GroupPresentation:
    """``E_k = <a, x, y | x^a = x^-1, y^a = x^k y^-1, [x,y,y] = [x,y,x] = 1>``."""
    a, x, y = (FreeWord.gen(i) for i in range(3))
    return GroupPresentation(
        ("a", "x", "y"),
        (
            a.inverse() * x * a * x,
            a.inverse() * y * a * y * x ** (-k),
            commutator(x, y, y),
            commutator(x, y, x),
        ),
    )


# ---------------------------------------------------------------------------
# H_2 of E_k

#: basis ([x,y,x], [x,y,y]) of H_2 N = gamma_3 F / gamma_4 F
H2N_BASIS = ((0, 1, 0), (0, 1, 1))


class ExtensionAmbiguous(ValueError):
    """The invariants term of the extension is nonzero, so H_2 is not determined."""


@dataclass(frozen=True)
class H2Result:
    k: int
    group: AbelianGroupInvariants
    action: IntMatrix
    invariants_h1n: Lattice


def h2_torus_extension(k: int) -> H2Result:
    """``H_2(E_k)`` from ``0 -> (H_2 N)_Z -> H_2 E_k -> (H_1 N)^Z -> 0``.

    The action on ``H_2 N`` is computed as the degree-3 Lie functor of the
    abelianized monodromy ``x -> -x, y -> kx - y``; it must equal ``a_k``.
    """
    if k % 2 == 0:
        raise ValueError(f"k must be odd, got {k}")
    a_k = a_matrix(k)
    action = lie_functor_matrix(a_k, 3, basis=H2N_BASIS)
    if action != a_k:
        raise AssertionError(f"degree-3 action {action} differs from a_{k}")
    b = b_matrix(k)
    fixed = kernel(b)
    if fixed.rank:
        raise ExtensionAmbiguous(f"(H_1 N)^Z has rank {fixed.rank}")
    return H2Result(k, cokernel(b), action, fixed)


# ---------------------------------------------------------------------------
# Baer invariants of free nilpotent groups

def _check_baer(r: int, c: int, n: int):
    if r < 1 or c < 1 or n < 1:
        raise ValueError("need r, c, n >= 1")
    if n + c > MAX_CLASS:
        raise ClassBoundError(f"n + c = {n + c} exceeds the class bound {MAX_CLASS}")


def baer_degrees(c: int, n: int) -> range:
    """Degrees ``i`` with ``gamma_i / gamma_{i+1}`` contributing to ``M_n(F / gamma_{c+1} F)``.

    ``R = gamma_{c+1} F``, so ``R cap gamma_{n+1} F = gamma_{max(c,n)+1} F`` and
    ``gamma_{n+1}(R, F) = gamma_{n+c+1} F``.
    """
    return range(max(c, n) + 1, n + c + 1)


def baer_free_nilpotent(r: int, c: int, n: int) -> AbelianGroupInvariants:
    _check_baer(r, c, n)
    return AbelianGroupInvariants((), sum(witt_rank(r, i) for i in baer_degrees(c, n)))


def graded_commutator_rank(r: int, degree: int) -> int:
    """Rank of the span of graded images of all left-normed commutators of weight ``degree``."""
    images = [graded_image(basic_commutator_word(seq), degree, r) for seq in left_normed_words(r, degree)]
    return lie_span_rank(images)


def baer_rank_by_commutators(r: int, c: int, n: int) -> int:
    """Brute-force count of :func:`baer_free_nilpotent` via the Magnus embedding."""
    _check_baer(r, c, n)
    return sum(graded_commutator_rank(r, i) for i in baer_degrees(c, n))


def baer_transition_rank(r: int, c: int, n: int, steps: int) -> int:
    """Rank of the image of ``M_{n+steps} -> M_n`` for ``F / gamma_{c+1} F``.

    The source numerator is ``gamma_{max(c, n+steps)+1}``; its image in
    ``M_n`` is the part of degrees up to ``n + c``.
    """
    _check_baer(r, c, n + steps)
    lo = max(c, n + steps) + 1
    return sum(witt_rank(r, i) for i in range(lo, n + c + 1))


def baer_transition_trivial(r: int, c: int, n: int, steps: int | None = None) -> bool:
    """Whether ``M_{n+steps} -> M_n`` is zero (``steps`` defaults to ``c``).

    Decided from filtration indices and confirmed on graded images: every
    degree surviving in the image must carry a nonzero commutator image.
    """
    steps = c if steps is None else steps
    rank = baer_transition_rank(r, c, n, steps)
    lo = max(c, n + steps) + 1
    spot = sum(graded_commutator_rank(r, i) for i in range(lo, n + c + 1))
    if spot != rank:
        raise AssertionError("graded images disagree with the filtration count")
    return rank == 0


# ---------------------------------------------------------------------------
# towers and lim^1

@dataclass(frozen=True)
class Tower:
    """Inverse system ``T_0 <- T_1 <- ...`` of finitely generated abelian groups.

    Level ``i`` is ``Z^g_i / relations[i]``; ``maps[i]`` is the integer
    matrix (``g_i x g_{i+1}``) of ``T_{i+1} -> T_i`` on generators.
    """

    generators: tuple[int, ...]
    relations: tuple[IntMatrix, ...]
    maps: tuple[IntMatrix, ...]

    def __post_init__(self):
        if len(self.relations) != len(self.generators):
            raise ValueError("one relation matrix per level")
        if len(self.maps) != len(self.generators) - 1:
            raise ValueError("need one connecting map between consecutive levels")
        for i, (g, rel) in enumerate(zip(self.generators, self.relations)):
            if rel.nrows != g:
                raise ValueError(f"relation matrix at level {i} has the wrong height")
        for i, f in enumerate(self.maps):
            if f.shape != (self.generators[i], self.generators[i + 1]):
                raise ValueError(f"connecting map {i + 1} -> {i} has shape {f.shape}")

    @classmethod
    def constant(cls, group_relations: IntMatrix, length: int, map_matrix: IntMatrix | None = None) -> "Tower":
        g = group_relations.nrows
        f = IntMatrix.identity(g) if map_matrix is None else map_matrix
        return cls((g,) * length, (group_relations,) * length, (f,) * (length - 1))

    def __len__(self):
        return len(self.generators)

    def group(self, i: int) -> AbelianGroupInvariants:
        return cokernel(self.relations[i])

    def composite(self, n: int, j: int) -> IntMatrix:
        """Matrix of ``T_{n+j} -> T_n``."""
        out = IntMatrix.identity(self.generators[n])
        for i in range(n, n + j):
            out = out @ self.maps[i]
        return out

    def image(self, n: int, j: int) -> Lattice:
        """Image of ``T_{n+j}`` in ``T_n``, as a lattice containing the relations."""
        g = self.generators[n]
        vecs = self.composite(n, j).columns() + self.relations[n].columns()
        return Lattice.from_generators(vecs, g)


@dataclass(frozen=True)
class MittagLefflerResult:
    verdict: str  # "zero" or "unknown"
    depth: int | None = None


def lim1_mittag_leffler(T: Tower) -> MittagLefflerResult:
    """Certify ``lim^1 T = 0`` by a uniform Mittag-Leffler depth inside the window.

    Looks for the least ``d`` such that, at every level ``n`` with room for
    at least one further comparison, the images of ``T_{n+j} -> T_n`` agree
    for all ``j >= d`` up to the top of the tower. Failing that the answer
    is ``unknown``: a finite window can never certify ``lim^1 != 0``.
    """
    L = len(T)
    for d in range(L - 1):
        levels = range(0, L - 1 - d)
        stable = True
        for n in levels:
            ref = T.image(n, d)
            if any(T.image(n, j) != ref for j in range(d + 1, L - n)):
                stable = False
                break
        if stable and len(levels):
            return MittagLefflerResult("zero", d)
    return MittagLefflerResult("unknown")


def baer_tower(r: int, c: int, levels: int) -> Tower:
    """The tower ``M_1 <- M_2 <- ...`` of ``F / gamma_{c+1} F`` in graded coordinates.

    ``M_n`` is free on the Lyndon basis of degrees ``max(c,n)+1 .. n+c``; the
    inclusion-induced map keeps the common degrees and kills the rest.
    """
    degrees = [list(baer_degrees(c, n)) for n in range(1, levels + 1)]
    for n in range(1, levels + 1):
        _check_baer(r, c, n)
    gens = [sum(witt_rank(r, i) for i in ds) for ds in degrees]
    maps = []
    for n in range(levels - 1):
        tgt, src = degrees[n], degrees[n + 1]
        rows = []
        for dt in tgt:
            for bt in range(witt_rank(r, dt)):
                row = []
                for ds in src:
                    for bs in range(witt_rank(r, ds)):
                        row.append(int(ds == dt and bs == bt))
                rows.append(row)
        maps.append(IntMatrix(rows, gens[n + 1]))
    rels = tuple(IntMatrix.zeros(g, 0) for g in gens)
    return Tower(tuple(gens), rels, tuple(maps))


# ---------------------------------------------------------------------------
# completion models

@dataclass(frozen=True)
class CompletionModel:
    """Concrete model of a completion of ``G_k`` or ``E_k``.

    ``Ghat``: ``Z x|_{a_k} (Z/2^m)^2``.
    ``Ehat``: ``Z x|_{a'_k} N`` with ``s, t`` mod ``2^{m+1}`` and ``u`` mod ``2^m``.
    ``Zinf``: ``Z x|_{a'_k} N_script`` with exact 2-local coordinates.
    ``Edense``: ``Z x|_{a'_k} (N (x) Z_(2))``, the exact dense part of ``Ehat``.
    """

    which: str
    k: int
    precision: int | None
    group: SemidirectGroup = field(compare=False)

    @property
    def a(self) -> SemidirectElement:
        return self.group.a

    def fiber_element(self, s=0, t=0, u=0) -> SemidirectElement:
        F = self.group.fiber
        if self.which == "Ghat":
            if u:
                raise ValueError("Ghat has no central coordinate")
            return self.group.lift(F.element(s, t))
        return self.group.lift(F.element(s, t, u))

    @property
    def x(self) -> SemidirectElement:
        return self.fiber_element(1, 0)

    @property
    def y(self) -> SemidirectElement:
        return self.fiber_element(0, 1)

    @property
    def c(self) -> SemidirectElement:
        """``[x, y]``."""
        if self.which == "Ghat":
            return self.group.identity()
        return self.fiber_element(0, 0, 1)

    def element(self, n=0, s=0, t=0, u=0) -> SemidirectElement:
        """``a^n x^s y^t [x,y]^u``."""
        return self.group.element(n) * self.fiber_element(s, t, u)

    def to_json(self) -> dict:
        return {"model": self.which, "k": self.k, "precision": self.precision, "name": self.group.name}


def completion_model(which: str, k: int, m: int | None = None) -> CompletionModel:
    if k % 2 == 0:
        raise ValueError(f"k must be odd, got {k}")
    if which in ("Ghat", "Ehat"):
        if m is None or m < 3:
            raise ValueError("truncated models need precision m >= 3")
    if which == "Ghat":
        G = torus_bundle_group(k, 1 << m)
    elif which == "Ehat":
        G = heisenberg_extension(k, mod_domain(m))
    elif which == "Zinf":
        G = heisenberg_extension(k, NSCRIPT)
        m = None
    elif which == "Edense":
        G = heisenberg_extension(k, DYADIC)
        m = None
    else:
        raise ValueError(f"unknown model {which!r}")
    return CompletionModel(which, k, m, G)


def project_ehat_to_ghat(model: CompletionModel, g: SemidirectElement) -> tuple[CompletionModel, SemidirectElement]:
    """``Ehat(k, m) -> Ghat(k, m+1)``: forget the central coordinate."""
    if model.which != "Ehat":
        raise ValueError("projection starts from an Ehat model")
    target = completion_model("Ghat", model.k, model.precision + 1)
    return target, target.element(g.n, g.h.s, g.h.t)


def project_dense_to_zinf(model: CompletionModel, g: SemidirectElement) -> tuple[CompletionModel, SemidirectElement]:
    """``Z x| (N (x) Z_(2)) -> Z x| N_script``: take ``u`` modulo the integers."""
    if model.which != "Edense":
        raise ValueError("projection starts from the dense Edense model")
    target = completion_model("Zinf", model.k)
    return target, target.element(g.n, g.h.s, g.h.t, mod_one(g.h.u))


# ---------------------------------------------------------------------------
# gamma_omega witnesses

@dataclass(frozen=True)
class GammaOmegaWitness:
    """``[x^w, a, ..., a, y]`` (``depth`` copies of ``a``) equals ``[x, y]^u`` in the Zinf model.

    ``shift`` is the integer ``z`` with ``u = z + (-2)^depth w``.
    """

    k: int
    target: DyadicModOne
    depth: int
    base_exponent: DyadicLocal
    shift: int

    def evaluate(self) -> SemidirectElement:
        model = completion_model("Zinf", self.k)
        xw = model.fiber_element(self.base_exponent, 0)
        return sd_commutator(xw, *([model.a] * self.depth), model.y)

    def verify(self) -> bool:
        model = completion_model("Zinf", self.k)
        return self.evaluate() == model.fiber_element(0, 0, self.target)

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "depth": self.depth,
            "base_exponent": self.base_exponent.to_json(),
            "shift": str(self.shift),
        }


def gamma_omega_witness(k: int, u, n: int) -> GammaOmegaWitness:
    """Write ``[x, y]^u`` as an ``(n+1)``-fold commutator, so it lies in ``gamma_{n+2}``."""
    if k % 2 == 0:
        raise ValueError(f"k must be odd, got {k}")
    if n < 1:
        raise ValueError("depth must be at least 1")
    target = u if isinstance(u, DyadicModOne) else mod_one(DyadicLocal.coerce(u))
    q = target.value
    mod = 1 << n
    z = q.numerator * pow(q.denominator, -1, mod) % mod
    w = (q - z) / ((-2) ** n)
    return GammaOmegaWitness(k, target, n, w, z)
