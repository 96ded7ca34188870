"""Case tables for the four position-1 families, the separatrix-based subcase
resolution, and the union-find closure that names disk and square classes."""

import random
from dataclasses import dataclass, field

from .canonical import CanonicalSystem, NonGeneric, normalize_to_family
from .genericity import discriminants
from .singularities import relative_positions

KEYS_14 = ("q1_p2", "q2_p2", "q3_p4", "q4_p4")
KEYS_23 = ("q1_p2", "q2_p3", "q3_p4", "q4_p1")
FAMILY_KEYS = {1: KEYS_14, 2: KEYS_23, 3: KEYS_23, 4: KEYS_14}


class UnrealizablePosition(ValueError):
    pass


class AmbiguousSkeleton(RuntimeError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


# A condition is (quantity, sign) with quantity in det, Delta, m (= b10 - a01), T, K, delta.
def _cond(text):
    out = []
    for part in text.split():
        name, sign = part[:-1], part[-1]
        out.append((name, 1 if sign == "+" else -1))
    return tuple(out)


def _family_1():
    rows = [("1.1", "><<>", "det-"), ("1.2", "<<<>", "det-"), ("1.3", "><>>", "det-"),
            ("1.4a", "<<>>", "det-"), ("1.4b", "<<>>", "det+"), ("1.5", ">><>", "det-"),
            ("1.6a", ">>>>", "det-"), ("1.6b", ">>>>", "det+"), ("1.7", "<>>>", "det+"),
            ("1.8", "><<<", "det-"), ("1.9a", "<<<<", "det-"), ("1.9b", "<<<<", "det+"),
            ("1.10", "<<><", "det+"), ("1.11a", ">><<", "det-"), ("1.11b", ">><<", "det+"),
            ("1.12", "<><<", "det+"), ("1.13", ">>><", "det+"), ("1.14", "<>><", "det+")]
    return [(label, pattern, _cond(c)) for label, pattern, c in rows]


_PATTERNS_23 = (">><<", "<><<", ">>><", "<>><", "><<<", "><><", "<<><", ">><>",
                "<><>", ">>>>", "<>>>", "><<>", "<<<>", "><>>", "<<>>")


def _family_2():
    rows = []
    for k, pattern in enumerate(_PATTERNS_23, 1):
        for suffix, c in (("a", "Delta+ m-"), ("b", "Delta+ m+"), ("c", "Delta-")):
            rows.append((f"2.{k}{suffix}", pattern, _cond(c)))
    return rows


def _family_3():
    return [(f"3.{k}", pattern, ()) for k, pattern in enumerate(_PATTERNS_23, 1)]


_SPLIT_BY_T = (("a", "det+ T+"), ("b", "det+ T-"))
_SADDLE_ORIGIN = (("a", "det- Delta+ delta+"), ("b", "det- Delta+ delta-"), ("c", "det- Delta-"))
_BOTH = (("a.i", "det+ T+"), ("a.ii", "det+ T-"), ("b.i", "det- Delta+ delta+"),
         ("b.ii", "det- Delta+ delta-"), ("b.iii", "det- Delta-"))


def _family_4():
    layout = [
        (1, "><<>", (("a.i", "det+ T+ K+"), ("a.ii", "det+ T+ K-"),
                     ("b.i", "det+ T- K+"), ("b.ii", "det+ T- K-"))),
        (2, "<<<>", _SPLIT_BY_T), (3, "><>>", _SPLIT_BY_T), (4, "<<>>", _BOTH),
        (5, ">><>", _SPLIT_BY_T), (6, ">>>>", _BOTH), (7, "<>>>", _SADDLE_ORIGIN),
        (8, "><<<", _SPLIT_BY_T), (9, "<<<<", _BOTH), (10, "<<><", _SADDLE_ORIGIN),
        (11, ">><<", _BOTH), (12, "<><<", _SADDLE_ORIGIN), (13, ">>><", _SADDLE_ORIGIN),
        (14, "<>><", _SADDLE_ORIGIN),
    ]
    return [(f"4.{k}{s}", pattern, _cond(c)) for k, pattern, split in layout for s, c in split]


TABLES = {1: _family_1(), 2: _family_2(), 3: _family_3(), 4: _family_4()}
ROWS = {label: (family, pattern, conds) for family, rows in TABLES.items()
        for label, pattern, conds in rows}


@dataclass(frozen=True)
class CaseLabel:
    family: int
    case: str
    subcase: str | None = None
    position: int = 1
    candidates: tuple = ()
    transform_log: tuple = field(default=(), compare=False)

    @property
    def name(self):
        return self.subcase or self.case

    def __str__(self):
        return self.name

    def to_json(self):
        return {"position": self.position, "family": self.family, "case": self.case,
                "subcase": self.subcase, "candidates": list(self.candidates),
                "transform_log": [list(e) if isinstance(e, tuple) else e for e in self.transform_log]}


def _quantities(c):
    d = discriminants(c)
    return {"det": d.detA, "Delta": d.Delta, "m": c.b10 - c.a01, "T": d.T, "K": d.K, "delta": d.delta}


def _pattern(c, family):
    rel = relative_positions(c)
    return "".join(rel[k] for k in FAMILY_KEYS[family])


def matching_rows(c, family):
    """Every table row whose conditions hold for a normalized system."""
    pattern = _pattern(c, family)
    q = _quantities(c)
    hits = []
    for label, row_pattern, conds in TABLES[family]:
        if row_pattern == pattern and all(q[name] * sign > 0 for name, sign in conds):
            hits.append(label)
    return hits


def _zero_quantity(c, family):
    """A discriminant that the family's rows test but that vanishes here."""
    q = _quantities(c)
    pattern = _pattern(c, family)
    tested = {name for _, row_pattern, conds in TABLES[family] if row_pattern == pattern
              for name, _ in conds}
    for name in sorted(tested):
        scale = 1.0 if name != "m" else max(1.0, abs(c.b10), abs(c.a01))
        if abs(q[name]) <= 1e-12 * scale:
            return name
    return None


def classify_case(c):
    """Table row of a system; positions 2 and 3 only get their family tag."""
    red = normalize_to_family(c)
    n = red.system
    if red.position != 1:
        return CaseLabel(red.family, f"P{red.position}F{red.family}", position=red.position,
                         transform_log=n.transform_log)
    rel = relative_positions(n)
    if rel.degenerate:
        raise NonGeneric("a q-singularity coincides with a p-singularity",
                         witness=[k for k, v in rel.signs.items() if v == "="])
    zero = _zero_quantity(n, red.family)
    if zero:
        raise NonGeneric(f"{zero} vanishes", witness=zero)
    hits = matching_rows(n, red.family)
    if not hits:
        raise UnrealizablePosition(
            f"family {red.family}: positions {_pattern(n, red.family)} match no table row")
    if len(hits) > 1:  # the tables partition the sign space; this is a data bug
        raise AssertionError(f"several rows match: {hits}")
    return CaseLabel(red.family, hits[0], transform_log=n.transform_log)


def _sample_system(rng, family):
    def mag():
        return 10 ** rng.uniform(-2, 2)

    b10 = mag() if family in (1, 2) else -mag()
    b01 = mag() if family in (1, 3) else -mag()
    a01 = 0.0 if rng.random() < 0.02 else mag()
    if family in (1, 2) and rng.random() < 0.02:
        b10 = 0.0
    return CanonicalSystem(rng.uniform(0.001, 0.999), rng.uniform(0.5, 0.999), 1.0, a01, b10, b01)


def construct_row(label, seed=0, max_tries=400000):
    """Search the row's inequality region for a parameter set; None when nothing is found."""
    family = ROWS[label][0]
    rng = random.Random(f"{label}:{seed}")
    for _ in range(max_tries):
        c = _sample_system(rng, family)
        if c.det == 0 or relative_positions(c).degenerate:
            continue
        if _zero_quantity(c, family):
            continue
        if matching_rows(c, family) == [label]:
            return c
    return None


# Rows whose portraits split further by where separatrices of the infinite saddles land.
FOUR_WAY = ("2.1a", "2.1b", "2.2b", "2.3b", "2.5a", "2.8a", "2.4b", "2.12a", "4.4b.i", "4.11b.ii")
TWO_WAY = ("2.2a", "2.3a", "2.5b", "2.8b", "2.6a", "2.9a", "2.10b", "2.6b", "2.9b", "2.10a",
           "2.7b", "2.11b", "2.13a", "2.14a", "4.6a.i", "4.6a.ii", "4.9a.i", "4.9a.ii",
           "4.6b.i", "4.6b.ii", "4.7a", "4.9b.i", "4.9b.ii", "4.10a", "4.12b", "4.13b")
SPLITS = {**{r: 4 for r in FOUR_WAY}, **{r: 2 for r in TWO_WAY}}
# The separatrix count cannot tell these suffixes apart.
UNRESOLVABLE = ("4.6a.i", "4.6a.ii", "4.9a.i", "4.9a.ii")


def portrait_name(row, k):
    return f"{row}.{k}" if row.startswith("4.") else f"{row}{k}"


def portrait_labels(row):
    n = SPLITS.get(row)
    return [row] if n is None else [portrait_name(row, k) for k in range(1, n + 1)]


ALL_PORTRAITS = tuple(p for row in ROWS for p in portrait_labels(row))

# Rows listed together have the same set of portraits; split rows pair suffixes by index.
ROW_EQUIVALENCES = {
    1: [("1.2", "1.3", "1.5", "1.8"), ("1.4a", "1.11a"), ("1.4b", "1.11b"), ("1.6a", "1.9a"),
        ("1.6b", "1.9b"), ("1.7", "1.10", "1.12", "1.13")],
    2: [("2.1a", "2.1b"), ("2.2a", "2.3a", "2.5b", "2.8b"), ("2.2b", "2.3b", "2.5a", "2.8a"),
        ("2.2c", "2.3c", "2.5c", "2.8c"),
        ("2.4a", "2.12b"), ("2.4b", "2.12a"), ("2.4c", "2.12c"),
        ("2.6a", "2.9a", "2.10b"), ("2.6b", "2.9b", "2.10a"), ("2.6c", "2.9c", "2.10c"),
        ("2.7a", "2.11a", "2.13b", "2.14b"), ("2.7b", "2.11b", "2.13a", "2.14a"),
        ("2.7c", "2.11c", "2.13c", "2.14c"), ("2.15a", "2.15b"),
        ("2.1a", "2.2b", "2.4b"), ("2.1c", "2.2c", "2.4c", "2.6c", "2.7c", "2.15c"),
        ("2.2a", "2.6a", "2.6b", "2.7b"), ("2.4a", "2.7a", "2.15a")],
    3: [("3.2", "3.3", "3.5", "3.8"), ("3.4", "3.12"), ("3.6", "3.9", "3.10"),
        ("3.7", "3.11", "3.13", "3.14")],
    4: [("4.2a", "4.3a", "4.5b", "4.8b"), ("4.2b", "4.3b", "4.5a", "4.8a"),
        ("4.4a.i", "4.11a.ii"), ("4.4a.ii", "4.11a.i"), ("4.4b.i", "4.11b.ii"),
        ("4.4b.ii", "4.7b", "4.10b", "4.11b.i", "4.12a", "4.13a", "4.14a", "4.14b"),
        ("4.4b.iii", "4.6b.iii", "4.7c", "4.9b.iii", "4.10c", "4.11b.iii", "4.12c", "4.13c", "4.14c"),
        ("4.6a.i", "4.9a.i"), ("4.6a.ii", "4.9a.ii"),
        ("4.6b.i", "4.6b.ii", "4.7a", "4.9b.i", "4.9b.ii", "4.10a", "4.12b", "4.13b")],
}

# Individual portraits identified directly.
PORTRAIT_EQUIVALENCES = {
    2: [("2.1a2", "2.1a3", "2.2a1"), ("2.1a4", "2.2a2", "2.4a")],
    4: [("4.6a.i.1", "4.6a.ii.2"), ("4.6a.i.2", "4.6a.ii.1"),
        ("4.4b.i.2", "4.4b.i.3", "4.6b.i.1"), ("4.4b.i.4", "4.4b.ii", "4.6b.i.2")],
}

CROSS_FAMILY = [("1.11b", "3.4"), ("1.7", "3.7"), ("1.14", "3.15"), ("2.1a1", "4.4b.i.1"),
                ("2.1a3", "4.4b.i.3"), ("2.1a4", "4.4b.i.4"), ("2.1c", "4.4b.iii")]

DISK_CLASSES = ("1.1", "1.2", "1.4a", "1.4b", "1.6a", "1.6b", "1.7", "1.14",
                "2.1a1", "2.1a3", "2.1a4", "2.1c", "3.1", "3.2", "3.6",
                "4.1a.i", "4.1a.ii", "4.1b.i", "4.1b.ii", "4.2a", "4.2b", "4.4a.i", "4.4a.ii",
                "4.6a.i.1", "4.6a.ii.1")

SQUARE_CLASSES = ("1.1", "1.2", "1.4a", "1.4b", "1.6a", "1.6b", "1.7", "1.14",
                  "2.6a1", "2.7a", "2.15a", "3.1", "3.2", "3.6",
                  "4.1b.i", "4.2a", "4.4a.i", "4.6a.i.1", "4.6a.ii.1", "4.6b.i.1")

# Rows with the same picture inside the unit square: corner and edge singularities,
# origin, polycycle and cycle, up to the symmetries of the square and time reversal.
SQUARE_ROW_GROUPS = [
    ("1.1", "2.1a", "2.1b", "2.1c"), ("1.14", "3.15"),
    ("1.2", "1.3", "1.5", "1.8", "2.2a", "2.2b", "2.2c", "2.3a", "2.3b", "2.3c",
     "2.5a", "2.5b", "2.5c", "2.8a", "2.8b", "2.8c"),
    ("1.4a", "1.11a", "2.4a", "2.4b", "2.4c", "2.12a", "2.12b", "2.12c",
     "4.4b.i", "4.4b.ii", "4.4b.iii", "4.11b.i", "4.11b.ii", "4.11b.iii"),
    ("1.4b", "1.11b", "3.4", "3.12", "4.4a.ii", "4.11a.i"), ("1.6a", "1.9a"), ("1.6b", "1.9b"),
    ("1.7", "1.10", "1.12", "1.13", "3.7", "3.11", "3.13", "3.14"),
    ("2.15a", "2.15b", "2.15c", "4.14a", "4.14b", "4.14c"),
    ("2.6a", "2.6b", "2.6c", "2.9a", "2.9b", "2.9c", "2.10a", "2.10b", "2.10c"),
    ("2.7a", "2.7b", "2.7c", "2.11a", "2.11b", "2.11c", "2.13a", "2.13b", "2.13c",
     "2.14a", "2.14b", "2.14c", "4.7a", "4.7b", "4.7c", "4.10a", "4.10b", "4.10c",
     "4.12a", "4.12b", "4.12c", "4.13a", "4.13b", "4.13c"),
    ("3.1", "4.1a.i", "4.1b.ii"),
    ("3.2", "3.3", "3.5", "3.8", "4.2b", "4.3b", "4.5a", "4.8a"), ("3.6", "3.9", "3.10"),
    ("4.1a.ii", "4.1b.i"), ("4.2a", "4.3a", "4.5b", "4.8b"), ("4.4a.i", "4.11a.ii"),
    ("4.6a.i", "4.6a.ii", "4.9a.i", "4.9a.ii"),
    ("4.6b.i", "4.6b.ii", "4.6b.iii", "4.9b.i", "4.9b.ii", "4.9b.iii"),
]
# Inside the square the 4.6a portraits keep their suffix; time reversal swaps .i and .ii.
SQUARE_PORTRAIT_EQUIVALENCES = [("4.6a.i.1", "4.6a.ii.2", "4.9a.i.1", "4.9a.ii.2"),
                                ("4.6a.i.2", "4.6a.ii.1", "4.9a.i.2", "4.9a.ii.1")]


def _coarse(kind):
    if kind == "saddle":
        return "S"
    return "A" if kind.startswith(("stable", "weak_stable")) else "R"


def square_picture(c):
    """Symbolic picture of the flow on the centre square, up to the square's symmetries and time reversal.

    Corners and edge points are read counter-clockwise from p1 as S (saddle),
    A (attracting) or R (repelling), "-" marking an edge with no q-singularity;
    then the origin, the limit cycle and the polycycle."""
    from .genericity import cherkas_quantity, polycycle_report, trace_at_origin
    from .singularities import classify_origin, p_singularities, q_singularities

    P = {r.id: _coarse(r.local_type) for r in p_singularities(c)}
    Q = {r.id: _coarse(r.local_type) for r in q_singularities(c)}
    on = relative_positions(c).on_edge()
    ring = []
    for p, q in (("p1", "q1"), ("p2", "q2"), ("p3", "q3"), ("p4", "q4")):
        ring += [P[p], Q[q] if on[q] else "-"]
    origin = _coarse(classify_origin(c).local_type)
    poly = polycycle_report(c)
    loop = cycle = "-"
    if poly.exists:
        loop = "A" if cherkas_quantity(c) > 0 else "R"
        if c.det > 0 and trace_at_origin(c) * cherkas_quantity(c) < 0:
            cycle = "R" if origin == "A" else "A"
    views = []
    for flip in (False, True):
        swap = {"A": "R", "R": "A"} if flip else {}
        r = [swap.get(v, v) for v in ring]
        for mirrored in (r, r[:1] + r[1:][::-1]):
            for k in range(0, 8, 2):
                views.append((tuple(mirrored[k:] + mirrored[:k]),) +
                             tuple(swap.get(v, v) for v in (origin, cycle, loop)))
    return min(views)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.edges = {x: [] for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b, reason=""):
        self.edges[a].append((b, reason))
        self.edges[b].append((a, reason))
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())

    def chain(self, a, b):
        """Shortest list of (label, reason) hops from a to b."""
        prev = {a: None}
        queue = [a]
        for x in queue:
            if x == b:
                break
            for y, reason in self.edges[x]:
                if y not in prev:
                    prev[y] = (x, reason)
                    queue.append(y)
        if b not in prev:
            return None
        hops = []
        while prev[b] is not None:
            x, reason = prev[b]
            hops.append((b, reason))
            b = x
        return list(reversed(hops))


def _link_rows(uf, rows, reason):
    sizes = {SPLITS.get(r, 1) for r in rows}
    if len(sizes) != 1:
        raise ValueError(f"rows {rows} split into different numbers of portraits")
    for r in rows[1:]:
        for a, b in zip(portrait_labels(rows[0]), portrait_labels(r)):
            uf.union(a, b, reason)


def _link(uf, labels, reason):
    for other in labels[1:]:
        uf.union(labels[0], other, reason)


def disk_closure(families=(1, 2, 3, 4), cross=True):
    labels = [p for p in ALL_PORTRAITS if int(p[0]) in families]
    uf = UnionFind(labels)
    for f in families:
        for rows in ROW_EQUIVALENCES[f]:
            _link_rows(uf, rows, f"family {f} rows")
        for group in PORTRAIT_EQUIVALENCES.get(f, ()):
            _link(uf, group, f"family {f} portraits")
    if cross:
        for group in CROSS_FAMILY:
            _link(uf, group, "across families")
    return uf


def square_closure():
    uf = UnionFind(ALL_PORTRAITS)
    for rows in SQUARE_ROW_GROUPS:
        if any(r in UNRESOLVABLE for r in rows):
            continue
        members = [p for r in rows for p in portrait_labels(r)]
        _link(uf, members, "same square picture")
    for group in SQUARE_PORTRAIT_EQUIVALENCES:
        _link(uf, group, "same square picture")
    return uf


def _representatives(uf, names):
    reps = {}
    for members in uf.classes():
        named = [m for m in members if m in names]
        if len(named) != 1:
            raise ValueError(f"class {sorted(members)[:6]} holds named members {named}")
        for m in members:
            reps[m] = named[0]
    return reps


_DISK = disk_closure()
_SQUARE = square_closure()
DISK_OF = _representatives(_DISK, DISK_CLASSES)
SQUARE_OF = _representatives(_SQUARE, SQUARE_CLASSES)


@dataclass(frozen=True)
class PortraitClass:
    disk_class: str | None
    square_class: str | None
    stability_flipped: bool
    chain: tuple = ()
    candidates: tuple = ()

    def to_json(self):
        return {"disk_class": self.disk_class, "square_class": self.square_class,
                "stability_flipped": self.stability_flipped,
                "chain": [list(h) for h in self.chain], "candidates": list(self.candidates)}


def _flipped(label):
    return sum(1 for e in label.transform_log if e == "time_reversal") % 2 == 1


def portrait_class(label):
    """Disk and square class of a resolved label; split rows without a suffix list candidates."""
    if label.position != 1:
        return PortraitClass(None, None, _flipped(label))
    names = [label.subcase] if label.subcase else list(label.candidates) or portrait_labels(label.case)
    disks = sorted({DISK_OF[n] for n in names})
    squares = sorted({SQUARE_OF[n] for n in names})
    if len(disks) > 1 or len(squares) > 1:
        return PortraitClass(None if len(disks) > 1 else disks[0],
                             None if len(squares) > 1 else squares[0],
                             _flipped(label), (), tuple(names))
    chain = tuple(_DISK.chain(names[0], disks[0]) or ())
    return PortraitClass(disks[0], squares[0], _flipped(label), chain)


def _landing_split(skeleton):
    """Count of infinite-saddle separatrices ending at finite singularities, and the charts they leave."""
    charts = []
    for s in skeleton.free():
        if ":" in s.saddle and s.endpoint is not None and ":" not in s.endpoint:
            charts.append(s.saddle.split(":")[0])
    return len(charts), charts


def resolve_subcase(label, skeleton):
    """Pick the numeric suffix of a split row from the traced separatrices."""
    row = label.case
    n = SPLITS.get(row)
    if label.position != 1 or n is None:
        return label
    bad = [f"{s.saddle}:{s.branch}" for s in skeleton.separatrices if s.status in ("ambiguous", "unresolved")]
    if bad:
        raise AmbiguousSkeleton(f"unresolved separatrices {bad}", candidates=portrait_labels(row))
    if row in UNRESOLVABLE:
        return CaseLabel(label.family, row, None, label.position, tuple(portrait_labels(row)),
                         label.transform_log)
    count, charts = _landing_split(skeleton)
    if n == 4:
        if count == 2:
            k = 1
        elif count == 1:
            k = 3 if charts[0].startswith("U") else 2
        elif count == 0:
            k = 4
        else:
            k = None
    else:
        k = {1: 1, 0: 2}.get(count)
    if k is None:
        return CaseLabel(label.family, row, None, label.position, tuple(portrait_labels(row)),
                         label.transform_log)
    return CaseLabel(label.family, row, portrait_name(row, k), label.position, (), label.transform_log)


@dataclass
class Classification:
    label: CaseLabel
    portrait: PortraitClass | None
    system: CanonicalSystem
    skeleton: object = None

    def to_json(self):
        return {"label": self.label.to_json(), "name": self.label.name,
                "class": None if self.portrait is None else self.portrait.to_json(),
                "normalized": self.system.to_json()}


def classify(c, trace=True, flow_options=None):
    """Table row, separatrix-resolved subcase and portrait class of a canonical system."""
    red = normalize_to_family(c)
    label = classify_case(c)
    skel = None
    if label.position == 1 and label.case in SPLITS and trace:
        from .portrait import Flow, trace_separatrices
        skel = trace_separatrices(red.system, Flow(red.system, **(flow_options or {})))
        label = resolve_subcase(label, skel)
    return Classification(label, portrait_class(label), red.system, skel)
