from fractions import Fraction

from conseq_lab.core import all_patterns, reverse
from conseq_lab.enumeration import dp_perm_counts
from conseq_lab.wilf import (check_sufficiency, classify, closed_under, converse_candidates,
                             khor_condition, known_classes, nonoverlapping_fraction,
                             nonoverlapping_signature_check, signature,
                             strong_from_plain_check)


def test_classify_s3():
    part = classify(3, "perms", 8, 3)
    assert [[str(v) for v in b] for b in part.blocks] == [["123", "321"],
                                                         ["132", "213", "231", "312"]]
    assert closed_under(part, reverse)
    assert part.label.startswith("candidate partition at depth")
    assert len(part.hashes[0]) == 16


def test_classify_blocks_agree_with_raw_counts():
    part = classify(4, "perms", 8, 0)
    for b in part.blocks:
        rows = {dp_perm_counts(v, 8, 0).rows for v in b}
        assert len(rows) == 1


def test_parallel_classification_is_identical():
    a = classify(4, "perms", 7, 1)
    b = classify(4, "perms", 7, 1, workers=2)
    assert a.to_json_obj() == b.to_json_obj()


def test_khor_pairs_and_sufficiency():
    assert khor_condition("1342", "1432")
    assert not khor_condition("1342", "1243")
    rep = check_sufficiency(4, 7, 2, 4)
    assert ("1342", "1432") in rep.pairs and rep.ok
    assert signature("1342", "words", 7, 1, 4) == signature("1432", "words", 7, 1, 4)


def test_nonoverlapping_checks():
    assert nonoverlapping_signature_check(4, 8)["consistent"]
    assert strong_from_plain_check(4, 8, 2)["consistent"]


def test_known_classes_cover_everything():
    cls = known_classes(4)
    assert sorted(v for c in cls for v in c) == sorted(all_patterns(4))
    assert converse_candidates(4) == []


def test_nonoverlapping_fraction_values():
    assert [nonoverlapping_fraction(d) for d in (3, 4, 5, 6)] == [
        Fraction(2, 3), Fraction(1, 2), Fraction(2, 5), Fraction(7, 18)]
