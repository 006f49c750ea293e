"""Closed-geodesic length spectra: records, JSON I/O and word enumeration.

A record groups the conjugacy classes sharing one length and one power index.
``rho_eigenvalues`` are the eigenvalues of the twist on the primitive element
gamma_0; when absent the trivial policy applies (``dim`` ones).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (AuditFailure, DiscretenessWarning, EmptySpectrumError, InvariantViolation,
                     ParseError)

__all__ = [
    "GeodesicRecord",
    "LengthSpectrum",
    "SpectrumSource",
    "GroupPresentation",
    "load_spectrum",
    "save_spectrum",
    "spectrum_to_json",
    "load_group",
    "generate_spectrum",
    "enumerate_classes",
    "systole",
    "ConjugacyClass",
    "ClassCensus",
    "translation_length",
    "hyperbolic_translation",
    "octagon_group",
]

LENGTH_TOL = 1e-9


@dataclass(frozen=True)
class GeodesicRecord:
    length: float
    primitive_length: float
    n_gamma: int = 1
    class_count: int = 1
    rho_eigenvalues: tuple[complex, ...] | None = None

    def __post_init__(self):
        if not (self.length > 0 and self.primitive_length > 0):
            raise InvariantViolation("lengths must be positive")
        if self.n_gamma < 1 or self.class_count < 1:
            raise InvariantViolation("n_gamma and class_count must be >= 1")
        if abs(self.length - self.n_gamma * self.primitive_length) > LENGTH_TOL * max(1.0, self.length):
            raise InvariantViolation(
                f"length {self.length} != {self.n_gamma} x {self.primitive_length}")
        if self.rho_eigenvalues is not None:
            object.__setattr__(self, "rho_eigenvalues", tuple(complex(z) for z in self.rho_eigenvalues))

    @property
    def is_primitive(self) -> bool:
        return self.n_gamma == 1

    def eigenvalues(self, dim: int = 1) -> tuple[complex, ...]:
        """Eigenvalues of rho on the primitive element (trivial policy if none stored)."""
        if self.rho_eigenvalues is None:
            return (1.0 + 0j,) * dim
        return self.rho_eigenvalues

    def trace(self, dim: int = 1) -> complex:
        """Tr rho(gamma) for gamma = gamma_0^n_gamma."""
        n = self.n_gamma
        vals = [lam ** n for lam in self.eigenvalues(dim)]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


class SpectrumSource(str, Enum):
    FILE = "file"
    GENERATED = "generated"


@dataclass(frozen=True)
class LengthSpectrum:
    records: tuple[GeodesicRecord, ...] = ()
    l_max: float = 0.0
    source: SpectrumSource = SpectrumSource.FILE
    audited: bool = False

    def __post_init__(self):
        recs = tuple(self.records)
        for i, r in enumerate(recs):
            if r.length > self.l_max + LENGTH_TOL:
                raise InvariantViolation(f"length {r.length} exceeds l_max {self.l_max}", i)
            if i and r.length < recs[i - 1].length:
                raise InvariantViolation("records must be sorted by length", i)
        object.__setattr__(self, "records", recs)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def primitives(self) -> tuple[GeodesicRecord, ...]:
        return tuple(r for r in self.records if r.n_gamma == 1)

    def truncated(self, l_max: float) -> "LengthSpectrum":
        return LengthSpectrum(tuple(r for r in self.records if r.length <= l_max), min(l_max, self.l_max),
                              self.source, self.audited)

    def growth_exponent(self) -> float:
        """c >= 0 with |lambda| <= e^{c l_0} for every stored eigenvalue."""
        c = 0.0
        for r in self.records:
            if r.rho_eigenvalues:
                big = max(abs(z) for z in r.rho_eigenvalues)
                if big > 0:
                    c = max(c, math.log(big) / r.primitive_length)
        return c


# --------------------------------------------------------------------------
# JSON I/O


def _record_to_obj(r: GeodesicRecord) -> dict:
    obj = {
        "length": r.length,
        "primitive_length": r.primitive_length,
        "n_gamma": r.n_gamma,
        "class_count": r.class_count,
    }
    if r.rho_eigenvalues is not None:
        obj["rho_eigenvalues"] = [[z.real, z.imag] for z in r.rho_eigenvalues]
    return obj


def spectrum_to_json(spec: LengthSpectrum) -> str:
    # json writes floats with repr, which round-trips binary64 exactly
    doc = {"l_max": spec.l_max, "records": [_record_to_obj(r) for r in spec.records]}
    return json.dumps(doc, indent=2) + "\n"


def save_spectrum(spec: LengthSpectrum, path) -> None:
    Path(path).write_text(spectrum_to_json(spec))


def _num(x, what, idx=None) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{what} must be a number" + (f" (record {idx})" if idx is not None else ""))
    return float(x)


def _int(x, what, idx) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer (record {idx})")
    return x


def parse_spectrum(text: str) -> LengthSpectrum:
    if not text.strip():
        return LengthSpectrum((), 0.0, SpectrumSource.FILE)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) - {"l_max", "records"} or "records" not in doc:
        raise ParseError("expected an object with keys l_max and records")
    records = []
    for i, obj in enumerate(doc["records"]):
        if not isinstance(obj, dict):
            raise ParseError(f"record {i} is not an object")
        extra = set(obj) - {"length", "primitive_length", "n_gamma", "class_count", "rho_eigenvalues"}
        if extra:
            raise ParseError(f"record {i}: unknown keys {sorted(extra)}")
        try:
            eig = obj.get("rho_eigenvalues")
            if eig is not None:
                eig = tuple(complex(_num(p[0], "eigenvalue", i), _num(p[1], "eigenvalue", i)) for p in eig)
            rec = GeodesicRecord(
                _num(obj["length"], "length", i),
                _num(obj["primitive_length"], "primitive_length", i),
                _int(obj.get("n_gamma", 1), "n_gamma", i),
                _int(obj.get("class_count", 1), "class_count", i),
                eig,
            )
        except KeyError as exc:
            raise ParseError(f"record {i}: missing {exc.args[0]}") from exc
        except (TypeError, IndexError) as exc:
            raise ParseError(f"record {i}: malformed eigenvalue list") from exc
        except InvariantViolation as exc:
            raise InvariantViolation(str(exc), i) from exc
        records.append(rec)
    l_max = _num(doc.get("l_max", max((r.length for r in records), default=0.0)), "l_max")
    return LengthSpectrum(tuple(records), l_max, SpectrumSource.FILE)


def load_spectrum(path) -> LengthSpectrum:
    return parse_spectrum(Path(path).read_text())


# --------------------------------------------------------------------------
# groups and word enumeration


@dataclass(frozen=True)
class GroupPresentation:
    """Generators in SL(2, R) (read modulo sign) and optional relator words.

    Letters: generator i is ``chr(ord('a') + i)``, its inverse the upper-case letter.
    """

    generators: tuple[np.ndarray, ...]
    relators: tuple[str, ...] = ()

    def __post_init__(self):
        gens = []
        for i, g in enumerate(self.generators):
            a = np.array(g, dtype=float)
            if a.shape != (2, 2):
                raise InvariantViolation("generator is not 2x2", i)
            if abs(np.linalg.det(a) - 1.0) > 1e-12:
                raise InvariantViolation(f"det = {np.linalg.det(a)!r} differs from 1", i)
            a.setflags(write=False)
            gens.append(a)
        object.__setattr__(self, "generators", tuple(gens))
        letters = set(self.alphabet)
        for w in self.relators:
            if set(w) - letters:
                raise InvariantViolation(f"relator {w!r} uses unknown letters")
        object.__setattr__(self, "relators", tuple(self.relators))

    @property
    def alphabet(self) -> str:
        n = len(self.generators)
        return "".join(chr(97 + i) for i in range(n)) + "".join(chr(65 + i) for i in range(n))

    def conjugated(self, h) -> "GroupPresentation":
        h = np.asarray(h, dtype=float)
        hi = np.linalg.inv(h)
        return GroupPresentation(tuple(h @ g @ hi for g in self.generators), self.relators)

    def word_matrix(self, word: str) -> np.ndarray:
        out = np.eye(2)
        for ch in word:
            out = out @ self._letter(ch)
        return out

    def _letter(self, ch: str) -> np.ndarray:
        i = ord(ch.lower()) - 97
        g = self.generators[i]
        if ch.isupper():
            return np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]])
        return g


def load_group(path) -> GroupPresentation:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "generators" not in doc or set(doc) - {"generators", "relators"}:
        raise ParseError("expected {generators: [...], relators?: [...]}")
    try:
        gens = tuple(np.array(g, dtype=float) for g in doc["generators"])
    except (TypeError, ValueError) as exc:
        raise ParseError("generators must be 2x2 numeric arrays") from exc
    return GroupPresentation(gens, tuple(doc.get("relators", ())))


def translation_length(trace: float) -> float:
    """2 arccosh(|tr|/2) for a hyperbolic element."""
    return 2.0 * math.acosh(abs(trace) / 2.0)


def hyperbolic_translation(length: float) -> np.ndarray:
    """diag(e^{l/2}, e^{-l/2}): translation by ``length`` along the imaginary axis."""
    return np.diag([math.exp(length / 2), math.exp(-length / 2)])


def octagon_group() -> GroupPresentation:
    """Genus-2 surface group of the regular octagon with opposite sides paired.

    g_k = R(k pi/4) T R(-k pi/4) in the disc model, where T translates by
    2 arccosh(1 + sqrt 2); conjugated to SL(2, R) by the Cayley map.
    """
    half = math.acosh(1 + math.sqrt(2))
    t = np.array([[math.cosh(half), math.sinh(half)], [math.sinh(half), math.cosh(half)]], dtype=complex)
    cay = np.array([[1, -1j], [1, 1j]]) / math.sqrt(2) / np.sqrt(1j)
    cay_inv = np.linalg.inv(cay)
    gens = []
    for k in range(4):
        phi = k * math.pi / 4
        rot = np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])
        g = rot @ t @ np.linalg.inv(rot)
        h = cay_inv @ g @ cay
        if np.max(np.abs(h.imag)) > 1e-12:
            raise ArithmeticError("Cayley conjugate is not real")
        gens.append(h.real)
    # g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = 1 for opposite-side pairings
    return GroupPresentation(tuple(gens), ("aBcDAbCd",))


# --------------------------------------------------------------------------
# breadth-first enumeration of conjugacy classes
#
# Words are int arrays over letters 0..2n-1 (i < n generator i, i + n its
# inverse).  A prefix is dropped when it freely cancels, when it contains more
# than half of a cyclic conjugate of a relator (Dehn's rule), or when it moves
# the base point i further than the prune radius.  Class candidates are the
# cyclically reduced, cyclically Dehn-reduced words that are the minimal
# rotation of themselves.


@dataclass(frozen=True)
class ConjugacyClass:
    word: str
    length: float
    trace: float
    n_gamma: int = 1
    root: str | None = None


@dataclass(frozen=True)
class ClassCensus:
    classes: tuple[ConjugacyClass, ...]
    elliptic_orders: dict
    depth: int
    collisions: int = 0

    def records(self, l_max: float, tol: float = LENGTH_TOL) -> tuple[GeodesicRecord, ...]:
        groups: dict[int, list[list[ConjugacyClass]]] = {}
        for c in sorted(self.classes, key=lambda c: (c.length, c.word)):
            if c.length > l_max + tol:
                continue
            bins = groups.setdefault(c.n_gamma, [])
            if bins and abs(bins[-1][0].length - c.length) <= tol:
                bins[-1].append(c)
            else:
                bins.append([c])
        out = []
        for n, bins in groups.items():
            for b in bins:
                ell = b[0].length
                out.append(GeodesicRecord(ell, ell / n, n, len(b)))
        out.sort(key=lambda r: (r.length, r.n_gamma))
        return tuple(out)


def _word_str(w, n: int) -> str:
    return "".join(chr(97 + x) if x < n else chr(65 + x - n) for x in w)


def _letter_code(ch: str, n: int) -> int:
    i = ord(ch.lower()) - 97
    return i + n if ch.isupper() else i


def _cosh_disp(mats: np.ndarray) -> np.ndarray:
    # cosh d(i, M i) = |M|_F^2 / 2 for M in SL(2, R)
    return 0.5 * np.einsum("nij,nij->n", mats, mats)


def _min_period(w: tuple) -> int:
    d = len(w)
    for p in range(1, d):
        if d % p == 0 and w == w[:p] * (d // p):
            return p
    return d


def _canonical(w: tuple) -> tuple:
    return min(w[i:] + w[:i] for i in range(len(w)))


def _psl_rows(mats: np.ndarray) -> np.ndarray:
    """Flattened matrices with the PSL sign fixed: largest entry made positive."""
    flat = mats.reshape(-1, 4)
    pick = np.argmax(np.abs(flat) > 0.5 * np.max(np.abs(flat), axis=1, keepdims=True), axis=1)
    sign = np.sign(flat[np.arange(len(flat)), pick])
    return flat * sign[:, None]


class _ElementSet:
    """Set of PSL(2, R) elements with tolerant membership (relative 1e-8)."""

    _proj = np.array([1.0, 0.5772156649, 0.3183098862, 0.1414213562])

    def __init__(self):
        self.keys = np.zeros(0)
        self.rows = np.zeros((0, 4))

    def contains(self, mats: np.ndarray) -> np.ndarray:
        if not len(mats) or not len(self.keys):
            return np.zeros(len(mats), dtype=bool)
        rows = _psl_rows(mats)
        keys = rows @ self._proj
        tol = 1e-8 * np.maximum(1.0, np.max(np.abs(rows), axis=1))
        lo = np.searchsorted(self.keys, keys - 2 * tol, side="left")
        hi = np.searchsorted(self.keys, keys + 2 * tol, side="right")
        out = np.zeros(len(mats), dtype=bool)
        for i in np.nonzero(hi > lo)[0]:
            out[i] = bool((np.max(np.abs(self.rows[lo[i]:hi[i]] - rows[i]), axis=1) < tol[i]).any())
        return out

    def add(self, mats: np.ndarray) -> None:
        if not len(mats):
            return
        rows = np.concatenate([self.rows, _psl_rows(mats)])
        keys = rows @ self._proj
        order = np.argsort(keys, kind="stable")
        self.keys, self.rows = keys[order], rows[order]


class _Enumerator:
    def __init__(self, grp: GroupPresentation, radius: float):
        self.n = n = len(grp.generators)
        if n == 0:
            raise InvariantViolation("group has no generators")
        self.base = 2 * n
        self.letters = np.array([grp._letter(ch) for ch in grp.alphabet])
        self.inv = np.array([(i + n) % (2 * n) for i in range(2 * n)])
        self.forbidden: dict[int, set] = {}
        for r in grp.relators:
            codes = [_letter_code(ch, n) for ch in r]
            for rr in (codes, [int(self.inv[x]) for x in reversed(codes)]):
                k = len(rr) // 2 + 1
                for i in range(len(rr)):
                    rot = rr[i:] + rr[:i]
                    self.forbidden.setdefault(k, set()).add(tuple(rot[:k]))
            if len(set(codes)) == 1 and len(codes) % 2 == 0:
                # x^p = 1 with p even: x^{p/2} and x^{-p/2} coincide, keep the first
                half = len(codes) // 2
                self.forbidden.setdefault(half, set()).add((int(self.inv[codes[0]]),) * half)
        self._forbidden_codes = {
            k: np.array(sorted(sum(x * self.base ** (k - 1 - i) for i, x in enumerate(sub)) for sub in subs))
            for k, subs in self.forbidden.items()}
        self.max_cosh = math.cosh(radius)
        self.depth = 0
        self.frontier_words = np.zeros((1, 0), dtype=np.int64)
        self.frontier_mats = np.eye(2)[None, :, :]
        self.seen = _ElementSet()
        self.seen.add(self.frontier_mats)
        self.hyperbolic: list[tuple[tuple, np.ndarray, float, float]] = []
        self.elliptic: list[tuple[tuple, float]] = []

    def _has_forbidden(self, words: np.ndarray, cyclic: bool) -> np.ndarray:
        bad = np.zeros(len(words), dtype=bool)
        d = words.shape[1]
        for k, sub_codes in self._forbidden_codes.items():
            if d < k:
                continue
            if cyclic:
                ext = np.concatenate([words, words[:, : k - 1]], axis=1)
                starts = range(d)
            else:
                ext = words
                starts = [d - k]
            for j in starts:
                seg = ext[:, j:j + k]
                code = seg @ (self.base ** np.arange(k - 1, -1, -1))
                bad |= np.isin(code, sub_codes)
        return bad

    def step(self):
        """Extend the frontier by one letter and harvest class candidates at the new depth."""
        w, m = self.frontier_words, self.frontier_mats
        new_w, new_m = [], []
        for c in range(self.base):
            mask = np.ones(len(w), dtype=bool) if w.shape[1] == 0 else (w[:, -1] != self.inv[c])
            if not mask.any():
                continue
            ww = np.concatenate([w[mask], np.full((mask.sum(), 1), c, dtype=np.int64)], axis=1)
            mm = m[mask] @ self.letters[c]
            new_w.append(ww)
            new_m.append(mm)
        self.depth += 1
        if not new_w:
            self.frontier_words = np.zeros((0, self.depth), dtype=np.int64)
            self.frontier_mats = np.zeros((0, 2, 2))
            return
        w = np.concatenate(new_w)
        m = np.concatenate(new_m)
        keep = ~self._has_forbidden(w, cyclic=False) & (_cosh_disp(m) <= self.max_cosh)
        w, m = w[keep], m[keep]
        # a word equal to an element reached at smaller depth cannot be a prefix of
        # a cyclically geodesic word; dropping it also removes relator loops
        fresh = ~self.seen.contains(m)
        w, m = w[fresh], m[fresh]
        self.seen.add(m)
        self.frontier_words, self.frontier_mats = w, m
        if not len(w):
            return
        d = self.depth
        cand = w[:, 0] != self.inv[w[:, -1]]
        cand &= ~self._has_forbidden(w, cyclic=True)
        if d * math.log2(self.base) < 62:
            weights = self.base ** np.arange(d - 1, -1, -1, dtype=np.int64)
            codes = np.stack([np.roll(w, -i, axis=1) @ weights for i in range(d)], axis=1)
            cand &= codes[:, 0] == codes.min(axis=1)
        else:
            cand &= np.array([tuple(x) == _canonical(tuple(x)) for x in w.tolist()])
        for word, mat in zip(w[cand].tolist(), m[cand]):
            tr = abs(mat[0, 0] + mat[1, 1])
            if tr > 2 + 1e-9:
                self.hyperbolic.append((tuple(word), mat, translation_length(tr), tr))
            elif tr < 2 - 1e-9:
                self.elliptic.append((tuple(word), tr))
            elif np.max(np.abs(np.abs(mat) - np.eye(2))) > 1e-9:
                raise InvariantViolation(f"parabolic element {_word_str(word, self.n)}: group is not cocompact")


def _ball(grp: GroupPresentation, radius_words: int) -> np.ndarray:
    """Matrices of all reduced words of length <= radius_words (identity included)."""
    enum = _Enumerator(grp, radius=math.inf)
    mats = [np.eye(2)[None]]
    for _ in range(radius_words):
        enum.step()
        mats.append(enum.frontier_mats)
    return np.concatenate(mats)


class _ConjugacyTester:
    """Decides g W g^-1 = +-R for short g and cyclic rotations R of a query word.

    Conjugator length is capped at half the longest relator; for the small
    cancellation presentations in scope that suffices between cyclically
    Dehn-reduced words.  Conjugate sets are sign-normalised (positive trace),
    sorted on the (0, 0) entry and cached per word.
    """

    def __init__(self, grp: GroupPresentation):
        half = max((len(r) for r in grp.relators), default=0) // 2
        self.enabled = half > 0
        if self.enabled:
            self.ball = _ball(grp, half)
            self.ball_inv = np.linalg.inv(self.ball)
        self.grp = grp
        self._rot_cache: dict[str, np.ndarray] = {}
        self._index_cache: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    @staticmethod
    def _normalise(mats: np.ndarray) -> np.ndarray:
        sign = np.where(mats[:, 0, 0] + mats[:, 1, 1] < 0, -1.0, 1.0)
        return (mats * sign[:, None, None]).reshape(-1, 4)

    def rotations(self, word: str) -> np.ndarray:
        r = self._rot_cache.get(word)
        if r is None:
            r = self._normalise(np.array([self.grp.word_matrix(word[i:] + word[:i]) for i in range(len(word))]))
            self._rot_cache[word] = r
        return r

    def _index(self, word: str) -> tuple[np.ndarray, np.ndarray]:
        idx = self._index_cache.get(word)
        if idx is None:
            mat = self.grp.word_matrix(word)
            conj = self._normalise(self.ball @ mat @ self.ball_inv)
            order = np.argsort(conj[:, 0])
            idx = (conj[order, 0], conj[order])
            self._index_cache[word] = idx
        return idx

    def conjugate(self, word: str, query: np.ndarray) -> bool:
        """Is some row of ``query`` (normalised 2x2 rows) a short conjugate of ``word``?"""
        if not self.enabled:
            return False
        keys, conj = self._index(word)
        tol = 1e-8 * max(1.0, float(np.max(np.abs(query))))
        lo = np.searchsorted(keys, query[:, 0] - tol, side="left")
        hi = np.searchsorted(keys, query[:, 0] + tol, side="right")
        for q, a, b in zip(query, lo, hi):
            if b > a and (np.max(np.abs(conj[a:b] - q), axis=1) < tol).any():
                return True
        return False


def _inverse_word(s: str) -> str:
    return s[::-1].swapcase()


def _classify(enum: _Enumerator, tester: _ConjugacyTester, l_max: float, tol: float) -> ClassCensus:
    n = enum.n
    cands = sorted((c for c in enum.hyperbolic if c[2] <= l_max + tol), key=lambda c: (c[2], c[0]))
    # cluster by length, merge conjugate words inside a cluster
    clusters: list[list] = []
    for c in cands:
        if clusters and abs(clusters[-1][0][2] - c[2]) <= tol and abs(clusters[-1][0][3] - c[3]) <= tol * max(1.0, c[3]):
            clusters[-1].append(c)
        else:
            clusters.append([c])
    classes: list[tuple[str, np.ndarray, float, float]] = []
    collisions = 0
    for cl in clusters:
        reps: list[tuple[str, np.ndarray, float, float]] = []
        for word, mat, ell, tr in cl:
            s = _word_str(word, n)
            if tester.enabled and any(tester.conjugate(r[0], tester.rotations(s)) for r in reps):
                continue
            reps.append((s, mat, ell, tr))
        # distinct classes sharing a trace, other than inverse pairs, are surfaced
        names = {r[0] for r in reps}
        inverses = 0
        for i, a in enumerate(reps):
            inv_s = _word_str(_canonical(tuple(_letter_code(ch, n) for ch in _inverse_word(a[0]))), n)
            if inv_s in names and inv_s > a[0]:
                inverses += 1
            elif inv_s not in names and tester.enabled and any(
                    b[0] > a[0] and tester.conjugate(b[0], tester.rotations(inv_s)) for b in reps):
                inverses += 1
        collisions += max(0, len(reps) - 1 - inverses)
        classes.extend(reps)
    # power bookkeeping
    primitive_lengths: list[tuple[float, str]] = []
    out = []
    for s, mat, ell, tr in sorted(classes, key=lambda c: (c[2], c[0])):
        p = _min_period(s)
        n_g, root = 1, None
        if p < len(s):
            n_g, root = len(s) // p, _word_str(_canonical(tuple(_letter_code(ch, n) for ch in s[:p])), n)
        elif tester.enabled:
            for l0, rw in primitive_lengths:
                k = round(ell / l0)
                if k >= 2 and abs(k * l0 - ell) <= tol * k and tester.conjugate(s, tester.rotations(rw * k)):
                    n_g, root = k, rw
                    break
        if n_g == 1:
            primitive_lengths.append((ell, s))
        out.append(ConjugacyClass(s, ell, tr, n_g, root))
    orders: dict[int, int] = {}
    for word, tr in enum.elliptic:
        theta = math.acos(min(1.0, tr / 2))
        frac = Fraction(theta / math.pi).limit_denominator(1000)
        if abs(float(frac) - theta / math.pi) > 1e-9 or frac == 0:
            raise InvariantViolation(f"elliptic word {_word_str(word, n)} has irrational rotation angle")
        orders[frac.denominator] = orders.get(frac.denominator, 0) + 1
    return ClassCensus(tuple(out), dict(sorted(orders.items())), enum.depth, collisions)


def _default_slack(grp: GroupPresentation) -> float:
    disp = [math.acosh(max(1.0, float(_cosh_disp(g[None])[0]))) for g in grp.generators]
    return 2.0 * max(disp)


def enumerate_classes(grp: GroupPresentation, depth: int, l_max: float, *, prune_slack: float | None = None,
                      length_tol: float = LENGTH_TOL) -> ClassCensus:
    """Conjugacy classes of length <= l_max among cyclic words of length <= depth."""
    slack = _default_slack(grp) if prune_slack is None else prune_slack
    enum = _Enumerator(grp, l_max + slack)
    tester = _ConjugacyTester(grp)
    for _ in range(depth):
        enum.step()
    return _classify(enum, tester, l_max, length_tol)


def _same_records(a, b, tol) -> bool:
    if len(a) != len(b):
        return False
    return all(x.n_gamma == y.n_gamma and x.class_count == y.class_count and abs(x.length - y.length) <= tol
               for x, y in zip(a, b))


def _check_elliptic_orders(orders: dict, elliptic_orders: Sequence[int]) -> None:
    declared = sorted(set(elliptic_orders))
    for nu in orders:
        if not any(d % nu == 0 for d in declared):
            raise InvariantViolation(f"elliptic element of order {nu} not allowed by declared orders {declared}")
    for d in declared:
        if d not in orders:
            raise InvariantViolation(f"declared elliptic order {d} not found among enumerated words")


def generate_spectrum(grp: GroupPresentation, l_max: float, audit_margin: int = 1, *, max_depth: int = 24,
                      prune_slack: float | None = None, length_tol: float = LENGTH_TOL,
                      elliptic_orders: Sequence[int] | None = None) -> LengthSpectrum:
    """Length spectrum up to l_max by breadth-first search over reduced words.

    Prefixes displacing the base point i by more than l_max + slack are
    pruned (slack defaults to twice the largest generator displacement).  The
    word depth is escalated until every surviving prefix displaces i by more
    than l_max and the record set has been unchanged over ``audit_margin``
    further levels; the run is then repeated with the slack widened by half
    and must agree again.
    Distinct classes that share a length (inverse pairs aside) raise one
    DiscretenessWarning per run and are kept as separate classes.
    ``elliptic_orders`` (the signature's nu_j) cross-checks the elliptic
    words found: each order must divide a declared one and every declared
    order must occur.
    """
    if audit_margin < 1:
        raise ValueError("audit_margin must be >= 1")
    if not l_max > 0:
        raise ValueError("l_max must be positive")
    slack = _default_slack(grp) if prune_slack is None else prune_slack

    def run(radius_slack):
        enum = _Enumerator(grp, l_max + radius_slack)
        tester = _ConjugacyTester(grp)
        history = []
        while enum.depth < max_depth:
            enum.step()
            census = _classify(enum, tester, l_max, length_tol)
            history.append(census.records(l_max, length_tol))
            # no verdict while some surviving prefix still moves the base point by <= l_max
            frontier = enum.frontier_mats
            if len(frontier) and float(np.min(_cosh_disp(frontier))) <= math.cosh(l_max):
                continue
            if len(history) > audit_margin and all(
                    _same_records(history[-1 - i], history[-1], length_tol) for i in range(1, audit_margin + 1)):
                return census, history[-1]
        raise AuditFailure(f"record set below l_max={l_max} still changing at word depth {max_depth}")

    census, records = run(slack)
    wide, wide_records = run(slack + slack / 2)
    if not _same_records(records, wide_records, length_tol):
        raise AuditFailure("record set changes when the prune radius is widened")
    if census.collisions:
        warnings.warn(f"{census.collisions} length coincidence(s) between non-conjugate, non-inverse classes",
                      DiscretenessWarning, stacklevel=2)
    if elliptic_orders is not None:
        _check_elliptic_orders(census.elliptic_orders, elliptic_orders)
    elif census.elliptic_orders:
        warnings.warn(f"elliptic elements of orders {sorted(census.elliptic_orders)} found", DiscretenessWarning,
                      stacklevel=2)
    return LengthSpectrum(records, l_max, SpectrumSource.GENERATED, audited=True)


def systole(spectrum: LengthSpectrum) -> float:
    """Shortest primitive length."""
    if not spectrum.records:
        raise EmptySpectrumError("systole of an empty spectrum")
    return min(r.primitive_length for r in spectrum.records)
