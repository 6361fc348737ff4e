"""Suite runner: aggregation, determinism, observations, report schema."""

import json

import pytest

import lambertmul as lm


def strip_wall_time(report_dict):
    doc = dict(report_dict)
    doc.pop("wall_time", None)
    return doc


@pytest.fixture(scope="module")
def small_report():
    return lm.run_suite(lm.SuiteConfig(trials=30, seed=5))


class TestRunSuite:
    def test_covers_every_property(self, small_report):
        assert [r.id for r in small_report.reports] == list(lm.ALL_PROPERTY_IDS)

    def test_all_pass(self, small_report):
        failed = [r.id for r in small_report.reports if not r.passed]
        assert not failed

    def test_schema(self, small_report):
        doc = small_report.to_dict()
        assert set(doc) == {"seed", "tol", "config", "reports", "observations", "wall_time"}
        for entry in doc["reports"]:
            assert set(entry) == {"id", "trials", "passed", "max_violation", "witness"}
        assert json.dumps(doc)  # JSON-serializable as-is

    def test_byte_identical_across_runs(self):
        cfg = lm.SuiteConfig(trials=25, seed=77)
        a = json.dumps(strip_wall_time(lm.run_suite(cfg).to_dict()), sort_keys=True)
        b = json.dumps(strip_wall_time(lm.run_suite(cfg).to_dict()), sort_keys=True)
        assert a == b

    def test_observations_present(self, small_report):
        ids = {o["id"] for o in small_report.observations}
        assert ids == {"STAR-VARIANT-INDUCED-NORM", "INVERSE-OPERATOR-FORM"}

    def test_inverse_form_never_fails(self, small_report):
        inverse_obs = next(
            o for o in small_report.observations if o["id"] == "INVERSE-OPERATOR-FORM"
        )
        assert inverse_obs["count"] == 0

    def test_star_variant_exceeds_plain_norm_somewhere(self, small_report):
        star_obs = next(
            o for o in small_report.observations if o["id"] == "STAR-VARIANT-INDUCED-NORM"
        )
        assert star_obs["count"] > 0
        assert star_obs["max_excess"] > 0
