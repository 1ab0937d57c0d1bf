import json
import random
from fractions import Fraction

import pytest

from nakai_forge.exprio import parse_poly, read_certificate, write_certificate
from nakai_forge.groebner import Ideal, ResourceLimitExceeded, buchberger, jacobian_ideal
from nakai_forge.pipeline import (
    INPUT_REJECTED,
    RESOURCE_EXHAUSTED,
    WITNESS_FOUND,
    PipelineConfig,
    WitnessCertificate,
    build_witness,
    certificate_failures,
    generic_slice_search,
    restrict_to_hyperplane,
    saito_check,
    slice_change,
    verify_certificate,
)
from nakai_forge.poly import Polynomial

V3 = ["x", "y", "z"]


def P(text, variables=V3):
    return parse_poly(text, variables)


PAPER_F = "x^2*y + y^2*z + z^2*x"
FERMAT = "x^3 + y^3 + z^3"


class TestSliceSearch:
    def test_fermat_identity_slice(self):
        choice = generic_slice_search(P(FERMAT), PipelineConfig())
        assert choice.coefficients == (1, 0, 0)
        assert choice.attempts == 1

    def test_paper_example_identity_slice_fails(self):
        # f restricted to x = 0 is y^2 z, which is not an isolated singularity
        f = P(PAPER_F)
        restriction = restrict_to_hyperplane(f)
        assert restriction == parse_poly("y^2*z", ["y", "z"])
        assert not buchberger(jacobian_ideal(restriction)).is_zero_dimensional()
        choice = generic_slice_search(f, PipelineConfig())
        assert choice.attempts > 1
        assert buchberger(jacobian_ideal(choice.restriction)).is_zero_dimensional()

    def test_paper_chosen_slice_works(self):
        # y1 = x + z: the restriction is y2*y3^2 + y2^2*y3 - y3^3
        change = slice_change((1, 0, 1), 3)
        g = change.apply(P(PAPER_F))
        restriction = restrict_to_hyperplane(g)
        assert restriction == parse_poly("y2*y3^2 + y2^2*y3 - y3^3", ["y2", "y3"])
        assert buchberger(jacobian_ideal(restriction)).is_zero_dimensional()

    def test_retry_cap(self):
        with pytest.raises(ResourceLimitExceeded):
            generic_slice_search(P(PAPER_F), PipelineConfig(max_retries=1))

    def test_determinism(self):
        cfg = PipelineConfig(seed=5)
        a = generic_slice_search(P(PAPER_F), cfg)
        b = generic_slice_search(P(PAPER_F), cfg)
        assert a.coefficients == b.coefficients

    def test_prefilter_same_answer(self):
        for seed in (0, 3):
            plain = generic_slice_search(P(PAPER_F), PipelineConfig(seed=seed))
            filtered = generic_slice_search(P(PAPER_F), PipelineConfig(seed=seed, modular_prefilter=True))
            assert plain.coefficients == filtered.coefficients

    def test_too_few_variables(self):
        with pytest.raises(ValueError):
            generic_slice_search(parse_poly("x^3 + y^3", ["x", "y"]), PipelineConfig())

    def test_first_coefficient_must_be_nonzero(self):
        with pytest.raises(ValueError):
            slice_change((0, 1, 0), 3)


class TestSaito:
    def test_constant_jacobian(self):
        gens = (parse_poly("x", ["x", "y"]), parse_poly("y", ["x", "y"]))
        report = saito_check(gens)
        assert report.jac_det == Polynomial.constant(2, 1)
        assert not report.member

    def test_fermat_jacobian(self):
        f = P(FERMAT)
        report = saito_check(jacobian_ideal(f).generators)
        assert report.jac_det == P("216*x*y*z")
        assert not report.member
        assert report.normal_form == P("216*x*y*z")

    def test_paper_modified_system(self):
        y = ["y1", "y2", "y3"]
        g = slice_change((1, 0, 1), 3).apply(P(PAPER_F))
        gens = (parse_poly("y1^2", y), g.partial(2), g.partial(3))
        report = saito_check(gens)
        assert not report.member

    def test_not_zero_dimensional_rejected(self):
        gens = (parse_poly("x", ["x", "y"]), parse_poly("x^2", ["x", "y"]))
        with pytest.raises(ValueError):
            saito_check(gens)


class TestBuildWitness:
    def test_fermat(self):
        cert = build_witness(P(FERMAT), V3)
        assert cert.verdict == WITNESS_FOUND
        doc = cert.document
        assert doc["input"]["milnor_number"] == 8
        assert doc["input"]["degree"] == 3
        witness = next(t for t in doc["membership_tests"]["tests"]
                       if t["name"] == "witness_diagonal_vs_modified_jacobian")
        assert not witness["member"]
        square = next(t for t in doc["membership_tests"]["tests"]
                      if t["name"] == "witness_diagonal_vs_square_ideal")
        assert not square["member"]
        assert doc["membership_tests"]["soundness_chain"]["chain_respected"]

    def test_paper_example(self):
        cert = build_witness(P(PAPER_F), V3)
        assert cert.verdict == WITNESS_FOUND
        assert cert.document["change_of_coordinates"]["attempts"] > 1

    def test_quadric_cone(self):
        # degree-2 isolated singularity: allowed through, flagged by degree
        cert = build_witness(P("x^2 + y^2 + z^2"), V3)
        assert cert.document["input"]["degree"] == 2
        assert cert.verdict == WITNESS_FOUND
        assert verify_certificate(cert)

    def test_non_isolated_rejected(self):
        cert = build_witness(P("x^2*y"), V3)
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "not_isolated"
        assert verify_certificate(cert)

    def test_non_homogeneous_rejected(self):
        cert = build_witness(P("x^2 + y^3"), V3)
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "not_homogeneous"
        assert verify_certificate(cert)

    def test_two_variables_rejected(self):
        cert = build_witness(parse_poly("x^3 + y^3", ["x", "y"]), ["x", "y"])
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "too_few_variables"
        assert verify_certificate(cert)

    def test_linear_rejected(self):
        cert = build_witness(P("x + y"), V3)
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "degree_too_small"
        assert verify_certificate(cert)

    def test_zero_rejected(self):
        cert = build_witness(Polynomial.zero(3), V3)
        assert cert.verdict == INPUT_REJECTED
        assert verify_certificate(cert)

    def test_resource_exhausted(self):
        cert = build_witness(P(PAPER_F), V3, PipelineConfig(max_retries=1))
        assert cert.verdict == RESOURCE_EXHAUSTED
        assert verify_certificate(cert)

    def test_determinism_byte_identical(self):
        cfg = PipelineConfig(seed=11)
        one = write_certificate(build_witness(P(PAPER_F), V3, cfg).document)
        two = write_certificate(build_witness(P(PAPER_F), V3, cfg).document)
        assert one == two

    def test_seed_changes_slice_but_not_validity(self):
        for seed in (0, 1, 2):
            cert = build_witness(P(PAPER_F), V3, PipelineConfig(seed=seed))
            assert cert.verdict == WITNESS_FOUND
            assert verify_certificate(cert)

    def test_rational_coefficients_end_to_end(self):
        cert = build_witness(P("1/2*x^3 + 2/3*y^3 + z^3"), V3)
        assert cert.verdict == WITNESS_FOUND
        assert verify_certificate(cert)

    def test_unused_variable_rejected(self):
        # the w-partial is zero, so the Jacobian ideal cannot be
        # zero-dimensional; the zero generator must flow through the
        # records without breaking cofactor indexing
        f = parse_poly("x^3 + y^3 + z^3", ["x", "y", "z", "w"])
        cert = build_witness(f, ["x", "y", "z", "w"])
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "not_isolated"
        assert verify_certificate(cert)

    def test_lex_order_certificate_verifies(self):
        from nakai_forge.poly import LEX

        cert = build_witness(P(FERMAT), V3, PipelineConfig(order=LEX))
        assert cert.verdict == WITNESS_FOUND
        assert cert.document["membership_tests"]["groebner_bases"]["jacobian"]["order"] == "lex"
        assert verify_certificate(cert)

    def test_dimension_cap(self):
        names = [f"x{i}" for i in range(1, 8)]
        f = parse_poly(" + ".join(f"x{i}^3" for i in range(1, 8)), names)
        cert = build_witness(f, names)
        assert cert.verdict == INPUT_REJECTED
        assert cert.document["input"]["rejection"]["reason"] == "dimension_cap"
        assert verify_certificate(cert)


class TestVerifyCertificate:
    def _fermat_cert(self):
        return build_witness(P(FERMAT), V3)

    def test_valid(self):
        assert verify_certificate(self._fermat_cert())

    def test_round_trip_through_bytes(self):
        cert = self._fermat_cert()
        doc = read_certificate(write_certificate(cert.document))
        assert verify_certificate(WitnessCertificate(doc))

    def test_tampered_coefficient(self):
        cert = self._fermat_cert()
        doc = json.loads(write_certificate(cert.document))
        doc["symmetric_tuple"]["images"][0][0] += " + x^2"
        assert not verify_certificate(WitnessCertificate(doc))

    def test_tampered_adjustment(self):
        cert = self._fermat_cert()
        doc = json.loads(write_certificate(cert.document))
        if doc["adjustments"]:
            doc["adjustments"][0]["coefficient"] += " + 1"
            assert not verify_certificate(WitnessCertificate(doc))

    def test_tampered_basis(self):
        cert = self._fermat_cert()
        doc = json.loads(write_certificate(cert.document))
        doc["membership_tests"]["groebner_bases"]["modified_jacobian_1"]["basis"][0] = "y1"
        assert not verify_certificate(WitnessCertificate(doc))

    def test_tampered_verdict(self):
        cert = build_witness(P("x^2*y"), V3)
        doc = json.loads(write_certificate(cert.document))
        doc["verdict"] = WITNESS_FOUND
        assert not verify_certificate(WitnessCertificate(doc))

    def test_tampered_slice(self):
        cert = self._fermat_cert()
        doc = json.loads(write_certificate(cert.document))
        doc["change_of_coordinates"]["slice_coefficients"] = ["1", "1", "0"]
        assert not verify_certificate(WitnessCertificate(doc))

    def test_tampered_normal_form(self):
        cert = self._fermat_cert()
        doc = json.loads(write_certificate(cert.document))
        for test in doc["membership_tests"]["tests"]:
            if not test["member"]:
                test["normal_form"] = "1"
                break
        assert not verify_certificate(WitnessCertificate(doc))

    def test_verify_is_deterministic(self):
        cert = self._fermat_cert()
        assert certificate_failures(cert) == certificate_failures(cert) == []

    def test_every_tamper_vector_detected(self):
        # one mutation per certificate section; each must flip validity
        def corrupt(path_desc, mutate):
            doc = json.loads(write_certificate(self._fermat_cert().document))
            mutate(doc)
            assert not verify_certificate(WitnessCertificate(doc)), path_desc

        corrupt("input polynomial", lambda d: d["input"].__setitem__(
            "polynomial", "x^3 + y^3 + 2*z^3"))
        corrupt("milnor number", lambda d: d["input"].__setitem__("milnor_number", 9))
        corrupt("isolated flag", lambda d: d["input"].__setitem__("isolated", False))
        corrupt("degree", lambda d: d["input"].__setitem__("degree", 4))
        corrupt("slice coefficients", lambda d: d["change_of_coordinates"].__setitem__(
            "slice_coefficients", ["2", "0", "0"]))
        corrupt("transformed polynomial", lambda d: d["change_of_coordinates"].__setitem__(
            "transformed_polynomial",
            d["change_of_coordinates"]["transformed_polynomial"] + " + y1"))
        corrupt("slice restriction", lambda d: d["change_of_coordinates"].__setitem__(
            "slice_restriction", "y2^3"))
        corrupt("candidate cofactor", lambda d: d["candidate_tuple"]["hessian_cofactors"].__setitem__(
            0, "36*y2*y3 + y1"))
        corrupt("candidate image", lambda d: d["candidate_tuple"]["images"][0].__setitem__(
            0, "0"))
        corrupt("candidate scale", lambda d: d["candidate_tuple"]["scales_f_by"].__setitem__(
            0, "1"))
        corrupt("symmetric image", lambda d: d["symmetric_tuple"]["images"][0].__setitem__(
            0, d["symmetric_tuple"]["images"][0][0] + " + y2"))
        corrupt("symmetric scale", lambda d: d["symmetric_tuple"]["scales_f_by"].__setitem__(
            0, "y1"))
        corrupt("operator coefficient", lambda d: d["lifted_operator"]["coefficients"].__setitem__(
            0, {"index": [1, 0, 0], "value": "y1^2"}))
        corrupt("basis element", lambda d: d["membership_tests"]["groebner_bases"]
                ["jacobian"]["basis"].__setitem__(0, "y1"))
        corrupt("basis cofactor", lambda d: d["membership_tests"]["groebner_bases"]
                ["jacobian"]["cofactors"][0].__setitem__(0, "y2"))
        corrupt("zero-dim flag", lambda d: d["membership_tests"]["groebner_bases"]
                ["modified_jacobian_1"].__setitem__("zero_dimensional", False))
        corrupt("membership flag", lambda d: next(
            t for t in d["membership_tests"]["tests"]
            if t["name"] == "witness_diagonal_vs_modified_jacobian"
        ).__setitem__("member", True))
        corrupt("membership cofactors", lambda d: next(
            t for t in d["membership_tests"]["tests"] if t["member"]
        )["cofactors"].__setitem__(0, "y3"))
        corrupt("soundness chain", lambda d: d["membership_tests"]["soundness_chain"].__setitem__(
            "outside_modified_jacobian", False))
