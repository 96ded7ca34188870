import collections
import random

import pytest

from octothorpe.canonical import (SYMMETRIES, CanonicalSystem, NonGeneric, apply_symmetry,
                                  undo_transforms)
from octothorpe.classifier import (ALL_PORTRAITS, DISK_CLASSES, DISK_OF, ROWS, SQUARE_CLASSES,
                                   SQUARE_OF, SQUARE_ROW_GROUPS, TABLES, AmbiguousSkeleton,
                                   CaseLabel, UnrealizablePosition, _sample_system, classify,
                                   classify_case, construct_row, disk_closure, matching_rows,
                                   portrait_class, relative_positions, resolve_subcase,
                                   square_closure, square_picture)
from octothorpe.portrait import SeparatrixSkeleton, Separatrix


def test_table_sizes():
    assert [len(TABLES[f]) for f in (1, 2, 3, 4)] == [18, 45, 15, 47]


def test_classify_examples():
    assert classify_case(CanonicalSystem(0.5, 0.5, 0.1, 5, 1, -0.5)).case == "2.1a"
    assert classify_case(CanonicalSystem(0.5, 0.5, 1, 3, -1, -0.5)).case == "4.1b.i"
    assert classify_case(CanonicalSystem(0.4888, 0.6895, 1.0, 5.6266, 0.2538, 0.02448)).case == "1.1"


def test_degenerate_positions_are_non_generic():
    with pytest.raises(NonGeneric):
        classify_case(CanonicalSystem(0.5, 0.5, 1.0, 1.0, 1, -0.5))


def test_unmatched_pattern_reported(monkeypatch):
    import octothorpe.classifier as mod
    c = construct_row("2.7b")
    pruned = dict(mod.TABLES)
    pruned[2] = [row for row in mod.TABLES[2] if row[0] != "2.7b"]
    monkeypatch.setattr(mod, "TABLES", pruned)
    with pytest.raises(UnrealizablePosition):
        classify_case(c)


def test_positions_two_and_three_get_family_tags():
    label = classify_case(CanonicalSystem(2.0, 0.5, 1, 0.5, 0.3, 1))
    assert label.position == 2 and label.case == "P2F1"
    assert portrait_class(label).disk_class is None


def test_rows_are_exclusive():
    rng = random.Random(7)
    seen = 0
    while seen < 10_000:
        family = rng.randint(1, 4)
        c = _sample_system(rng, family)
        if c.det == 0 or relative_positions(c).degenerate:
            continue
        seen += 1
        assert len(matching_rows(c, family)) == 1


def _class_of(label):
    pc = portrait_class(label)
    disk = pc.disk_class or frozenset(DISK_OF[p] for p in pc.candidates)
    return (disk, pc.square_class), pc.stability_flipped


def test_classification_invariant_under_maps():
    # Row labels may move to an equivalent row; the portrait class may only
    # change when the reduction reverses time on one side and not the other.
    for label in ROWS:
        c = construct_row(label)
        base, flipped = _class_of(classify_case(c))
        assert classify_case(apply_symmetry(c, "time_scale", 3.7)).case == label
        for m in SYMMETRIES + ("time_reversal",):
            moved = apply_symmetry(c, m)
            got, moved_flipped = _class_of(classify_case(moved))
            if moved_flipped == flipped:
                assert got == base, (label, m)
            assert undo_transforms(moved).params == pytest.approx(c.params)


def test_time_reversed_rows_are_distinct_classes():
    c = construct_row("4.1a.i")
    moved = classify_case(apply_symmetry(c, "phi1"))
    assert moved.case == "4.1b.ii"
    assert DISK_OF["4.1a.i"] != DISK_OF["4.1b.ii"]
    assert portrait_class(moved).stability_flipped != portrait_class(classify_case(c)).stability_flipped


def test_closure_counts():
    assert [len(disk_closure((f,), cross=False).classes()) for f in (1, 2, 3, 4)] == [8, 4, 6, 14]
    assert len(disk_closure().classes()) == 25
    assert len(square_closure().classes()) == 20
    assert len(DISK_CLASSES) == 25 and len(SQUARE_CLASSES) == 20


def test_every_portrait_has_a_class():
    for p in ALL_PORTRAITS:
        assert DISK_OF[p] in DISK_CLASSES
        assert SQUARE_OF[p] in SQUARE_CLASSES


@pytest.mark.parametrize("name, disk", [("1.3", "1.2"), ("4.4b.i.1", "2.1a1"), ("3.15", "1.14"),
                                        ("2.2a1", "2.1a3"), ("4.11b.ii.4", "2.1a4"), ("3.4", "1.4b")])
def test_disk_class_examples(name, disk):
    assert DISK_OF[name] == disk


def test_portrait_class_chain():
    label = CaseLabel(4, "4.4b.i", "4.4b.i.1")
    pc = portrait_class(label)
    assert pc.disk_class == "2.1a1" and pc.chain
    assert pc.chain[-1][0] == "2.1a1"


def test_unsplit_row_lists_candidates():
    pc = portrait_class(CaseLabel(2, "2.1a"))
    assert pc.disk_class is None and len(pc.candidates) == 4
    assert pc.square_class == "1.1"


def test_time_reversal_flag():
    c = CanonicalSystem(0.4, 0.7, -1.0, -2.0, 1.5, -0.5)
    assert portrait_class(classify_case(c)).stability_flipped


def test_square_groups_match_computed_pictures():
    groups = collections.defaultdict(list)
    for label in ROWS:
        groups[square_picture(construct_row(label))].append(label)
    assert sorted(map(sorted, groups.values())) == sorted(map(sorted, SQUARE_ROW_GROUPS))


def test_square_picture_ignores_sampling():
    for label in ("1.6a", "4.1a.ii", "2.15c"):
        assert square_picture(construct_row(label, seed=0)) == square_picture(construct_row(label, seed=5))


def _skeleton(landings):
    seps = [Separatrix(saddle, "unstable+", (1, 0), "U1", False, end, "resolved") for saddle, end in landings]
    return SeparatrixSkeleton([], seps)


def test_resolve_subcase_count_rule():
    label = CaseLabel(2, "2.1a")
    assert resolve_subcase(label, _skeleton([("U1:u+", "p2"), ("V1:u+", "p4")])).subcase == "2.1a1"
    assert resolve_subcase(label, _skeleton([("U1:u+", "p2"), ("V1:u+", "U2:0")])).subcase == "2.1a3"
    assert resolve_subcase(label, _skeleton([("U1:u+", "U1:0"), ("V1:u+", "p4")])).subcase == "2.1a2"
    assert resolve_subcase(label, _skeleton([("U1:u+", "U1:0"), ("V1:u+", "V1:0")])).subcase == "2.1a4"
    two = CaseLabel(4, "4.6b.i")
    assert resolve_subcase(two, _skeleton([("U1:u+", "p2")])).subcase == "4.6b.i.1"
    assert resolve_subcase(two, _skeleton([])).subcase == "4.6b.i.2"


def test_resolve_subcase_reports_ambiguity():
    sk = SeparatrixSkeleton([], [Separatrix("U1:u+", "unstable+", (1, 0), "U1", False, None, "ambiguous")])
    with pytest.raises(AmbiguousSkeleton) as e:
        resolve_subcase(CaseLabel(2, "2.1a"), sk)
    assert len(e.value.candidates) == 4
    res = resolve_subcase(CaseLabel(4, "4.6a.i"), _skeleton([]))
    assert res.subcase is None and res.candidates == ("4.6a.i.1", "4.6a.i.2")


def test_pipeline_small_lambda():
    res = classify(CanonicalSystem(0.5, 0.5, 0.05, 5, 1, -0.5))
    assert res.label.name == "2.1a1"
    assert res.portrait.disk_class == "2.1a1" and res.portrait.square_class == "1.1"
