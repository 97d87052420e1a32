"""End-to-end answering over grounded scenes, checked against brute force."""
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zoologic.grounding import Detection, DetectionSet, ImageMeta, ground
from zoologic.language import TaskFlags, ParsedQuery, parse
from zoologic.reasoner import (
    InternalTaskError,
    NoEntities,
    answer,
    answer_count,
    answer_exists,
    answer_json,
    answer_location,
    answer_payload,
    canonical_json,
)

from oracles import (
    CLASS_UNIVERSE,
    brute_boxes,
    brute_count,
    brute_exists,
    random_detection_set,
)


def scene():
    meta = ImageMeta(id="savanna", width=1280, height=720)
    dets = [
        Detection("zebra", 0.98, (112.0, 214.0, 298.0, 468.0)),
        Detection("zebra", 0.95, (352.0, 198.0, 540.0, 445.0)),
        Detection("zebra", 0.91, (610.0, 230.0, 804.0, 490.0)),
        Detection("buffalo", 0.88, (880.0, 260.0, 1150.0, 560.0)),
    ]
    return ground(DetectionSet(image=meta, detections=dets))


def flags(task):
    return TaskFlags(
        flags={
            "counting": task == "counting",
            "existence": task == "existence",
            "location": task == "location",
        },
        scores={"counting": 0.0, "existence": 0.0, "location": 0.0},
    )


def pq(task, entities):
    return ParsedQuery(raw="q", entities=tuple(entities), task=flags(task))


class TestCounting:
    def test_present_class(self):
        ans = answer_count(scene(), ["zebra"])
        assert ans.per_class == {"zebra": 3}
        assert ans.task == "counting"

    def test_absent_class_counts_zero(self):
        ans = answer_count(scene(), ["lion"])
        assert ans.per_class == {"lion": 0}

    def test_multiple_entities_keep_order(self):
        ans = answer_count(scene(), ["buffalo", "zebra", "lion"])
        assert list(ans.per_class.items()) == [("buffalo", 1), ("zebra", 3), ("lion", 0)]

    def test_counts_are_ints(self):
        ans = answer_count(scene(), ["zebra"])
        assert type(ans.per_class["zebra"]) is int


class TestExistence:
    def test_present(self):
        assert answer_exists(scene(), ["buffalo"]).per_class == {"buffalo": True}

    def test_absent(self):
        assert answer_exists(scene(), ["tiger"]).per_class == {"tiger": False}

    def test_values_are_bools(self):
        ans = answer_exists(scene(), ["zebra", "tiger"])
        assert all(type(v) is bool for v in ans.per_class.values())


class TestLocation:
    def test_boxes_in_assertion_order(self):
        ans = answer_location(scene(), ["zebra"])
        assert ans.per_class["zebra"] == [
            (112.0, 214.0, 298.0, 468.0),
            (352.0, 198.0, 540.0, 445.0),
            (610.0, 230.0, 804.0, 490.0),
        ]

    def test_absent_class_gets_empty_list(self):
        assert answer_location(scene(), ["dog"]).per_class == {"dog": []}


class TestDispatch:
    def test_routes_each_task(self):
        kb = scene()
        assert answer(kb, pq("counting", ["zebra"])).per_class == {"zebra": 3}
        assert answer(kb, pq("existence", ["zebra"])).per_class == {"zebra": True}
        assert answer(kb, pq("location", ["buffalo"])).per_class == {
            "buffalo": [(880.0, 260.0, 1150.0, 560.0)]
        }

    def test_no_entities_rejected(self):
        with pytest.raises(NoEntities):
            answer(scene(), pq("counting", []))

    def test_all_flags_false_is_internal_error(self):
        bad = ParsedQuery(
            raw="q",
            entities=("zebra",),
            task=TaskFlags(
                flags={"counting": False, "existence": False, "location": False},
                scores={"counting": 0.0, "existence": 0.0, "location": 0.0},
            ),
        )
        with pytest.raises(InternalTaskError):
            answer(scene(), bad)

    def test_two_flags_true_is_internal_error(self):
        bad = ParsedQuery(
            raw="q",
            entities=("zebra",),
            task=TaskFlags(
                flags={"counting": True, "existence": True, "location": False},
                scores={"counting": 0.0, "existence": 0.0, "location": 0.0},
            ),
        )
        with pytest.raises(InternalTaskError):
            answer(scene(), bad)


class TestTraces:
    def test_count_success_references_the_fact(self):
        ans = answer_count(scene(), ["zebra"])
        (step,) = ans.trace
        assert step.goal == "animal(zebra, C)"
        assert step.outcome == "success: C=3"
        assert step.clause == "animal(zebra, 3)"

    def test_exists_success_references_the_rule_head(self):
        ans = answer_exists(scene(), ["buffalo"])
        (step,) = ans.trace
        assert step.goal == "animal_exists(buffalo, C)"
        assert step.outcome == "success: C=1"
        assert step.clause == "animal_exists(A, C)"

    def test_location_success_one_step_per_box(self):
        ans = answer_location(scene(), ["zebra"])
        assert len(ans.trace) == 3
        assert ans.trace[0].clause == "animal_bbox(zebra, 112.0, 214.0, 298.0, 468.0)"
        assert all(s.goal == "animal_bbox(zebra, X1, Y1, X2, Y2)" for s in ans.trace)

    def test_failure_lists_tried_clauses(self):
        ans = answer_count(scene(), ["lion"])
        assert [s.outcome for s in ans.trace] == ["failure", "failure"]
        assert {s.clause for s in ans.trace} == {"animal(zebra, 3)", "animal(buffalo, 1)"}

    def test_failure_on_undefined_predicate_yields_single_step(self):
        meta = ImageMeta(id="empty", width=64, height=64)
        kb = ground(DetectionSet(image=meta, detections=[]))
        ans = answer_count(kb, ["zebra"])
        (step,) = ans.trace
        assert step.outcome == "failure"
        assert step.clause == ""

    def test_exists_failure_references_rule(self):
        ans = answer_exists(scene(), ["tiger"])
        (step,) = ans.trace
        assert step.outcome == "failure"
        assert step.clause == "animal_exists(A, C)"

    def test_failure_trace_is_capped(self):
        meta = ImageMeta(id="zoo", width=4096, height=4096)
        dets = [
            Detection(f"c{i}", 0.9, (float(i), 0.0, float(i) + 1.0, 1.0))
            for i in range(30)
        ]
        kb = ground(DetectionSet(image=meta, detections=dets))
        ans = answer_count(kb, ["zebra"])
        assert len(ans.trace) == 20

    def test_every_answered_class_has_trace_coverage(self):
        ans = answer_count(scene(), ["zebra", "lion", "buffalo"])
        goals = [s.goal for s in ans.trace]
        for label in ("zebra", "lion", "buffalo"):
            assert any(f"animal({label}, C)" == g for g in goals)


class TestPayload:
    def test_payload_shape(self):
        payload = answer_payload(answer_location(scene(), ["buffalo"]))
        assert payload["task"] == "location"
        assert payload["entities"] == ["buffalo"]
        assert payload["results"] == {"buffalo": [[880.0, 260.0, 1150.0, 560.0]]}
        assert payload["trace"][0] == {
            "goal": "animal_bbox(buffalo, X1, Y1, X2, Y2)",
            "outcome": "success: X1=880.0, Y1=260.0, X2=1150.0, Y2=560.0",
            "clause": "animal_bbox(buffalo, 880.0, 260.0, 1150.0, 560.0)",
        }

    def test_json_round_trips(self):
        ans = answer_count(scene(), ["zebra", "lion"])
        decoded = json.loads(answer_json(ans))
        assert decoded["results"] == {"zebra": 3, "lion": 0}

    def test_canonical_json_sorts_keys(self):
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'

    def test_canonical_json_is_byte_stable(self):
        ans = answer_count(scene(), ["zebra"])
        assert answer_json(ans) == answer_json(answer_count(scene(), ["zebra"]))


class TestEntitiesProperty:
    def test_entities_mirror_per_class_order(self):
        ans = answer_count(scene(), ["buffalo", "zebra"])
        assert ans.entities == ["buffalo", "zebra"]

    def test_answer_is_frozen(self):
        ans = answer_count(scene(), ["zebra"])
        with pytest.raises(AttributeError):
            ans.task = "existence"


QUESTION_SHAPES = {
    "counting": "How many {plural} are there?",
    "existence": "Is there {article} {single} in the image?",
    "location": "Locate {plural} in the image",
}

PLURALS = {
    "zebra": "zebras", "lion": "lions", "tiger": "tigers", "elephant": "elephants",
    "buffalo": "buffaloes", "rhino": "rhinos", "cow": "cows", "dog": "dogs",
    "polar_bear": "polar bears", "crocodile": "crocodiles",
}


def test_full_pipeline_matches_brute_force_on_random_scenes():
    # 500 scene/question pairs through parse -> ground -> answer,
    # checked against direct list arithmetic on the raw detections.
    rng = random.Random(20250819)
    for _ in range(500):
        dset = random_detection_set(rng)
        kb = ground(dset)
        label = rng.choice(sorted(CLASS_UNIVERSE))
        task = rng.choice(("counting", "existence", "location"))
        single = label.replace("_", " ")
        question = QUESTION_SHAPES[task].format(
            single=single,
            plural=PLURALS[label],
            article="an" if single[0] in "aeiou" else "a",
        )
        query = parse(question)
        assert query.entities == (label,)
        assert query.task.active() == [task]
        ans = answer(kb, query)
        if task == "counting":
            assert ans.per_class[label] == brute_count(dset.detections, label)
        elif task == "existence":
            assert ans.per_class[label] == brute_exists(dset.detections, label)
        else:
            assert ans.per_class[label] == brute_boxes(dset.detections, label)


@given(st.lists(st.sampled_from(sorted(CLASS_UNIVERSE)), min_size=1, max_size=5, unique=True),
       st.integers(min_value=0, max_value=2 ** 32 - 1))
@settings(max_examples=40)
def test_count_exists_location_are_mutually_consistent(labels, seed):
    rng = random.Random(seed)
    kb = ground(random_detection_set(rng))
    counts = answer_count(kb, labels).per_class
    exists = answer_exists(kb, labels).per_class
    boxes = answer_location(kb, labels).per_class
    for label in labels:
        assert exists[label] == (counts[label] >= 1)
        assert len(boxes[label]) == counts[label]
