"""Repair construction and the recommendation entry points."""

from fractions import Fraction

import pytest

from wrec.csp import consideration_set, is_consistent, requirement_refs
from wrec.dsl import parse
from wrec.fixtures import random_instance
from wrec.model import (
    Diagnosis,
    ModelError,
    Requirement,
    UnrepairableError,
    requirements_from_pairs,
)
from wrec.repair import (
    STATUS_REPAIRS,
    STATUS_SOLUTIONS,
    STATUS_UNREPAIRABLE,
    diagnose_for_item,
    recommend,
    recommend_for_item,
    repairs_for,
)


def repaired_requirements(requirements, repair):
    return [
        r if r.var not in repair.adaptation
        else Requirement(r.var, repair.adaptation[r.var], r.entry_rank)
        for r in requirements
    ]


class TestRepairsFor:
    def test_two_variable_diagnosis(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"mb", "cpu"}))
        repairs = repairs_for(kb, full_requirements, diagnosis)
        assert len(repairs) == 1
        (repair,) = repairs
        assert repair.adaptation == {"mb": "MBDiamond", "cpu": "CPUS"}
        assert repair.items == ("hw1",)
        assert repair.support == Fraction(2, 6)

    def test_single_variable_diagnosis(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"usage"}))
        repairs = repairs_for(kb, full_requirements, diagnosis)
        assert len(repairs) == 2
        assert {r.adaptation["usage"] for r in repairs} == {"Internet", "Office"}
        for repair in repairs:
            assert repair.items == ("energystar",)
            assert repair.support == Fraction(1, 6)

    def test_repaired_sets_are_consistent(self, kb, full_requirements):
        for elements in ({"mb", "cpu"}, {"usage"}):
            diagnosis = Diagnosis(frozenset(elements))
            for repair in repairs_for(kb, full_requirements, diagnosis):
                fixed = repaired_requirements(full_requirements, repair)
                assert is_consistent(kb, requirement_refs(fixed))
                assert list(repair.items) == consideration_set(kb, fixed)

    def test_adaptation_touches_only_diagnosed_variables(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"usage"}))
        for repair in repairs_for(kb, full_requirements, diagnosis):
            assert set(repair.adaptation) == {"usage"}

    def test_empty_diagnosis_on_consistent_requirements(self, kb):
        reqs = requirements_from_pairs([("maxprice", 1500)])
        repairs = repairs_for(kb, reqs, Diagnosis(frozenset()))
        assert len(repairs) == 1
        (repair,) = repairs
        assert repair.adaptation == {}
        assert repair.items == ("hw1",)
        assert repair.support == Fraction(0)

    def test_empty_diagnosis_with_no_requirements(self, kb):
        (repair,) = repairs_for(kb, (), Diagnosis(frozenset()))
        assert repair.items == ("hw1", "hw2", "energystar")
        assert repair.support == 0

    def test_non_diagnosis_is_rejected(self, kb, full_requirements):
        with pytest.raises(ValueError, match="not a diagnosis"):
            repairs_for(kb, full_requirements, Diagnosis(frozenset({"mb"})))

    def test_unrequired_variables_are_rejected(self, kb, full_requirements):
        with pytest.raises(ValueError, match="unrequired"):
            repairs_for(kb, full_requirements, Diagnosis(frozenset({"ghost"})))

    def test_max_alternatives_caps_and_validates(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"usage"}))
        repairs = repairs_for(kb, full_requirements, diagnosis, max_alternatives=1)
        assert len(repairs) == 1
        with pytest.raises(ValueError):
            repairs_for(kb, full_requirements, diagnosis, max_alternatives=0)

    def test_adaptations_are_distinct(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"usage"}))
        repairs = repairs_for(kb, full_requirements, diagnosis, max_alternatives=10)
        keys = [tuple(sorted(r.adaptation.items())) for r in repairs]
        assert len(set(keys)) == len(keys)

    def test_pin_restricts_items(self, kb, full_requirements):
        diagnosis = Diagnosis(frozenset({"usage"}))
        repairs = repairs_for(kb, full_requirements, diagnosis, pin="energystar")
        assert repairs and all(r.items == ("energystar",) for r in repairs)


class TestRecommend:
    def test_consistent_requirements_list_items(self, kb):
        reqs = requirements_from_pairs([("maxprice", 1500)])
        result = recommend(kb, reqs)
        assert result.status == STATUS_SOLUTIONS
        assert result.items == ("hw1",)
        assert result.groups == ()

    def test_no_requirements_list_everything(self, kb):
        result = recommend(kb, ())
        assert result.status == STATUS_SOLUTIONS
        assert result.items == ("hw1", "hw2", "energystar")

    def test_inconsistent_requirements_yield_repair_groups(self, kb, full_requirements):
        result = recommend(kb, full_requirements)
        assert result.status == STATUS_REPAIRS
        assert result.items == ()
        assert [set(g.diagnosis.elements) for g in result.groups] == [
            {"mb", "cpu"},
            {"usage"},
        ]
        first, second = result.groups
        assert [r.adaptation for r in first.repairs] == [
            {"mb": "MBDiamond", "cpu": "CPUS"}
        ]
        assert {r.adaptation["usage"] for r in second.repairs} == {"Internet", "Office"}

    def test_n_diagnoses_caps_groups(self, kb, full_requirements):
        result = recommend(kb, full_requirements, n_diagnoses=1)
        assert [set(g.diagnosis.elements) for g in result.groups] == [{"mb", "cpu"}]

    def test_unrepairable_keep_conflict(self):
        kb = parse(
            "&QUESTIONS\nu? [A, B] keep\n"
            "&PRODUCTS x_p\np1: 1\n"
            "&CONSTRAINTS\nincompatible{u=A}\n"
        )
        result = recommend(kb, requirements_from_pairs([("u", "A")]))
        assert result.status == STATUS_UNREPAIRABLE
        assert result.items == () and result.groups == ()

    def test_invalid_requirements_raise(self, kb):
        with pytest.raises(ModelError):
            recommend(kb, requirements_from_pairs([("usage", "Gaming")]))


class TestItemMode:
    def test_fitting_item_is_solutions(self, kb):
        reqs = requirements_from_pairs([("maxprice", 1500)])
        result = recommend_for_item(kb, reqs, "hw1")
        assert result.status == STATUS_SOLUTIONS
        assert result.items == ("hw1",)

    def test_blocked_item_gets_one_diagnosis_group(self, kb, full_requirements):
        result = recommend_for_item(kb, full_requirements, "energystar")
        assert result.status == STATUS_REPAIRS
        assert len(result.groups) == 1
        (group,) = result.groups
        assert set(group.diagnosis.elements) == {"usage"}
        assert all(r.items == ("energystar",) for r in group.repairs)

    def test_item_diagnosis_prefers_late_requirements(self, kb, full_requirements):
        diagnosis, repairs = diagnose_for_item(kb, full_requirements, "hw1")
        assert set(diagnosis.elements) == {"mb", "cpu"}
        assert [r.adaptation for r in repairs] == [{"mb": "MBDiamond", "cpu": "CPUS"}]

    def test_unknown_item_raises(self, kb, full_requirements):
        with pytest.raises(ModelError):
            recommend_for_item(kb, full_requirements, "ghost")
        with pytest.raises(ModelError):
            diagnose_for_item(kb, full_requirements, "ghost")

    def test_item_incompatible_with_kb_is_unrepairable(self):
        kb = parse(
            "&QUESTIONS\nu? [A]\n"
            "&PRODUCTS x_p\np1: 1\np2: 9\n"
            "&CONSTRAINTS\nx_p <= 5\n"
        )
        result = recommend_for_item(kb, (), "p2")
        assert result.status == STATUS_UNREPAIRABLE
        with pytest.raises(UnrepairableError):
            diagnose_for_item(kb, (), "p2")

    def test_item_against_keep_requirement_is_unrepairable(self):
        kb = parse(
            "&QUESTIONS\nsize? [small, big] keep\n"
            "&PRODUCTS size_p\np1: small\np2: big\n"
            "&CONSTRAINTS\nsize = size_p\n"
        )
        reqs = requirements_from_pairs([("size", "small")])
        result = recommend_for_item(kb, reqs, "p2")
        assert result.status == STATUS_UNREPAIRABLE


class TestInvariantsOnGeneratedInstances:
    @pytest.mark.parametrize("seed", range(1400, 1430))
    def test_recommendation_results_are_well_formed(self, seed):
        instance = random_instance(seed)
        kb, reqs = instance.kb, instance.requirements
        result = recommend(kb, reqs)
        if result.status == STATUS_SOLUTIONS:
            assert list(result.items) == consideration_set(kb, reqs)
        elif result.status == STATUS_REPAIRS:
            assert result.groups
            keep_vars = {v.name for v in kb.user_vars if v.keep}
            for group in result.groups:
                assert group.repairs
                assert not (group.diagnosis.elements & keep_vars)
                for repair in group.repairs:
                    fixed = repaired_requirements(reqs, repair)
                    assert is_consistent(kb, requirement_refs(fixed))
                    assert list(repair.items) == consideration_set(kb, fixed)
                    assert repair.support == Fraction(
                        group.diagnosis.cardinality, len(reqs)
                    )
        else:
            assert result.status == STATUS_UNREPAIRABLE
