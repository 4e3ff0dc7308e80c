import numpy as np
import pytest

from hbspace.analyzers import (
    a2_check,
    a2_product,
    carleson_sup_scan,
    corona_check,
    direct_carleson_verdict,
    ess_inf_weighted,
    isometry_refutation,
    kernel_ratio_scan,
    norm_equivalence_verdict,
    poisson_square_limit_check,
    reverse_carleson_verdict,
    reverse_inf_scan,
    sampling_refutation,
    symbol_reverse_feasibility,
    two_weight_necessary,
)
from hbspace.circle import grid_angles
from hbspace.errors import DegenerateMeasureError, UnsupportedError
from hbspace.functions import PowerOuter, polynomial_fn
from hbspace.measures import (
    ArcWindow,
    BoundaryAC,
    DiskMeasure,
    GridArcWeight,
    PowerArcWeight,
)
from hbspace.space import SymbolB, pair_from_outer_a, pythagorean_mate


@pytest.fixture(scope="module")
def half_sum():
    return pythagorean_mate(SymbolB.rational([0.5, 0.5]))


@pytest.fixture(scope="module")
def alpha_pair():
    return pair_from_outer_a(PowerOuter(0.25))


@pytest.fixture(scope="module")
def inv_gap_measure():
    # d(mu) = (1 - |b|^2)^-1 dm for the alpha pair, as an exact power density
    c = 2.0 ** -0.25
    return DiskMeasure(ac=BoundaryAC(PowerArcWeight(-0.5, c**-2, 0.0)), label="inv-gap")


class TestReverseInfScan:
    def test_lebesgue_is_one_at_every_level(self):
        scan = reverse_inf_scan(DiskMeasure.lebesgue(), depth=10)
        assert all(abs(v - 1.0) < 1e-9 for v in scan.per_level)
        assert scan.verdict_positive_inf() == "pass"

    def test_interior_atom_fails(self):
        scan = reverse_inf_scan(DiskMeasure.point_mass(0.5, 2.0), depth=8)
        assert scan.value == 0.0
        assert scan.verdict_positive_inf() == "fail"

    def test_density_bounded_below(self):
        delta = 0.3
        scan = reverse_inf_scan(
            DiskMeasure.from_density_grid(np.full(512, delta)), depth=8
        )
        assert scan.value >= delta - 1e-12

    def test_level_minima_nonincreasing(self, alpha_pair):
        mu = DiskMeasure.from_density_grid(
            1.0 + 0.5 * np.sin(grid_angles(1024)) ** 2
        )
        scan = reverse_inf_scan(mu, depth=10)
        assert all(b <= a + 1e-15 for a, b in zip(scan.cumulative, scan.cumulative[1:]))


class TestCarlesonSupScan:
    def test_lebesgue(self):
        scan = carleson_sup_scan(DiskMeasure.lebesgue(), depth=10)
        assert scan.value == pytest.approx(1.0, abs=1e-9)
        assert abs(scan.exponent) < 0.01
        assert scan.verdict_bounded() == "pass"

    def test_radial_power_grows_at_rate_beta(self):
        scan = carleson_sup_scan(DiskMeasure.radial_power(0.5), depth=10)
        assert scan.verdict_bounded() == "fail"
        assert scan.exponent == pytest.approx(-0.5, abs=0.02)

    def test_level_maxima_nondecreasing(self):
        scan = carleson_sup_scan(DiskMeasure.radial_power(0.3), depth=10)
        assert all(b >= a - 1e-15 for a, b in zip(scan.cumulative, scan.cumulative[1:]))


class TestEssInf:
    def test_product_identity(self, alpha_pair, inv_gap_measure):
        res = ess_inf_weighted(alpha_pair, inv_gap_measure)
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.verdict() == "pass"

    def test_reverse_canonical_at_least_one(self, alpha_pair):
        from hbspace.scenarios import build

        sc = build("reverse-canonical")
        res = ess_inf_weighted(sc.pair, sc.measure)
        assert res.value >= 1.0 - 1e-9

    def test_atomic_measure_gives_zero(self, half_sum):
        res = ess_inf_weighted(half_sum, DiskMeasure.point_mass(0.2, 1.0))
        assert res.value == 0.0
        assert res.verdict() == "fail"

    def test_vanishing_gap_detected_through_min_trend(self, half_sum):
        # (1 - |b|^2) h with h = 1 vanishes continuously at one boundary point:
        # the percentile is positive but the minimum trend exposes ess inf = 0
        res = ess_inf_weighted(half_sum, DiskMeasure.lebesgue())
        assert res.value > 0
        assert res.verdict() == "fail"


class TestA2Check:
    def test_constant_weight(self):
        scan = a2_check(np.ones(512), depth=8)
        assert scan.value == pytest.approx(1.0, abs=1e-9)
        assert scan.verdict_bounded() == "pass"

    def test_small_power_passes(self):
        scan = a2_check(PowerArcWeight(0.5), depth=12)
        assert scan.verdict_bounded() == "pass"
        assert not scan.infinite_witnesses

    def test_large_power_fails_with_rate(self):
        scan = a2_check(PowerArcWeight(1.5), depth=12)
        assert scan.verdict_bounded() == "fail"
        assert scan.infinite_witnesses  # arcs at the singularity are infinite
        assert scan.exponent == pytest.approx(-0.5, abs=0.05)

    def test_single_arc_product(self):
        # (avg w)(avg 1/w) >= 1 by Cauchy-Schwarz, equality for constants
        assert a2_product(np.full(256, 3.0), ArcWindow(1.0, 0.2)) == pytest.approx(1.0)
        rng = np.random.default_rng(5)
        w = rng.uniform(0.5, 2.0, 256)
        assert a2_product(w, ArcWindow(1.0, 0.2)) >= 1.0 - 1e-12


class TestTwoWeight:
    def test_reduces_to_a2_product_when_paired(self, alpha_pair):
        # h = |a|^-2 against w = |a|^2 is exactly the Muckenhoupt product
        c = 2.0 ** -0.25
        h = PowerArcWeight(-0.5, c**-2, 0.0)
        w = PowerArcWeight(0.5, c**2, 0.0)
        report, scan = two_weight_necessary(h, w, depth=10)
        a2 = a2_check(w, depth=10)
        assert scan.value == pytest.approx(a2.value, rel=1e-9)

    def test_constant_weights(self):
        report, scan = two_weight_necessary(np.ones(256), np.ones(256), depth=8)
        assert scan.value == pytest.approx(1.0, abs=1e-9)
        assert report.overall == "pass"

    def test_mixed_powers_bounded(self):
        # h ~ |1-e|^-0.5 and w ~ |1-e|^1.5: the paired averages stay bounded
        report, scan = two_weight_necessary(
            PowerArcWeight(-0.5), PowerArcWeight(1.5), depth=12
        )
        assert scan.verdict_bounded() == "pass"
        assert "necessary" in report.diagnostics["note"]


class TestCorona:
    def test_halfsum_infimum_is_one(self, half_sum):
        # |a| + |b| >= |a + b| = 1, attained on the real axis
        res = corona_check(half_sum, depth=12)
        assert res.infimum == pytest.approx(1.0, abs=1e-12)
        assert res.verdict == "pass"

    def test_trivial_pair(self):
        pair = pythagorean_mate(SymbolB.rational([0.0]))
        res = corona_check(pair, depth=8)
        assert res.infimum == pytest.approx(1.0)

    def test_blaschke_failure_tracks_zeros(self):
        from hbspace.scenarios import build

        sc = build("blaschke-corona", {"alpha": 0.4, "n_zeros": 12})
        res = corona_check(sc.pair, depth=12)
        assert res.verdict == "fail"
        c = 2.0 ** -0.4
        oracle = [c * 2.0 ** (-0.4 * n) for n in range(1, 13)]
        assert np.allclose(res.per_level, oracle, rtol=1e-6)


class TestKernelRatios:
    def test_isometric_case(self):
        pair = pythagorean_mate(SymbolB.rational([0.0]))
        scan = kernel_ratio_scan(pair, DiskMeasure.lebesgue(), depth=8)
        assert scan.max_ratio == pytest.approx(1.0, abs=1e-6)

    def test_degenerate_measure_raises(self, half_sum):
        with pytest.raises(DegenerateMeasureError):
            kernel_ratio_scan(half_sum, DiskMeasure.point_mass(0.0, 0.0), depth=4)

    def test_cauchy_variant(self, alpha_pair, inv_gap_measure):
        scan = kernel_ratio_scan(alpha_pair, inv_gap_measure, depth=8, variant="cauchy")
        assert np.isfinite(scan.max_ratio)


class TestReverseVerdict:
    def test_pass_case_all_conditions_agree(self, alpha_pair, inv_gap_measure):
        rep = reverse_carleson_verdict(alpha_pair, inv_gap_measure, depth=10,
                                       kernel_depth=8)
        assert rep.overall == "reverse-carleson"
        for key in ("MainThm.2", "MainThm.3", "MainThm.4"):
            assert rep.conditions[key].verdict == "pass"
        assert rep.constants["ess_inf"] == pytest.approx(1.0, abs=1e-9)

    def test_symbol_level_failure(self, half_sum):
        rep = reverse_carleson_verdict(half_sum, DiskMeasure.lebesgue(), depth=10,
                                       kernel_depth=8)
        assert rep.overall == "not-reverse-carleson"
        assert rep.conditions["Sarason.L1gap"].verdict == "fail"
        assert "integrable" in rep.diagnostics["symbol_certificate"]

    def test_killed_arc_fails_with_kernel_witness(self, alpha_pair):
        n = 2 ** 13
        t = grid_angles(n)
        gap2 = alpha_pair.gap2_grid(n)
        h = np.where((t > 3 * np.pi / 4) & (t < 5 * np.pi / 4), 0.0,
                     1.0 / np.maximum(gap2, 1e-300))
        h[gap2 == 0] = 0.0
        mu = DiskMeasure.from_density_grid(h)
        rep = reverse_carleson_verdict(alpha_pair, mu, depth=10, kernel_depth=12)
        assert rep.overall == "not-reverse-carleson"
        assert rep.conditions["MainThm.4"].value == 0.0
        assert rep.constants["kernel_ratio_max"] > 10

    def test_weighting_coherence(self, alpha_pair, inv_gap_measure):
        # positive essential infimum forces a stabilizing positive window infimum
        rep = reverse_carleson_verdict(alpha_pair, inv_gap_measure, depth=10,
                                       kernel_depth=6)
        assert rep.conditions["MainThm.4"].verdict == "pass"
        assert rep.conditions["MainThm.3"].verdict == "pass"
        assert rep.constants["reverse_window_inf"] >= 0.99

    def test_kernel_thesis_direction(self, alpha_pair, inv_gap_measure):
        # whenever the verdict passes, the kernel ratio maxima are finite/stable
        scan = kernel_ratio_scan(alpha_pair, inv_gap_measure, depth=10)
        assert np.isfinite(scan.max_ratio)
        assert scan.stabilized(window=0.25)

    def test_scale_equivariance_of_verdict(self, alpha_pair, inv_gap_measure):
        rep1 = reverse_carleson_verdict(alpha_pair, inv_gap_measure, depth=8,
                                        kernel_depth=6)
        rep2 = reverse_carleson_verdict(alpha_pair, inv_gap_measure.scaled(3.7),
                                        depth=8, kernel_depth=6)
        assert rep1.overall == rep2.overall
        assert rep2.constants["ess_inf"] == pytest.approx(
            3.7 * rep1.constants["ess_inf"], rel=1e-9
        )


class TestDirectVerdict:
    def test_halfsum_radial_dichotomy(self, half_sum):
        rep = direct_carleson_verdict(half_sum, DiskMeasure.radial_power(0.5), depth=12)
        assert rep.overall == "carleson-for-hb"
        assert rep.conditions["H2Window.mu"].verdict == "fail"
        assert rep.conditions["CorRationnel.nu"].verdict == "pass"
        assert rep.diagnostics["falpha_certificate"]["boundary_root_count"] == 1

    def test_trivial_symbol_reduces_to_h2_test(self):
        pair = pythagorean_mate(SymbolB.rational([0.0]))
        mu = DiskMeasure.lebesgue().plus(DiskMeasure.point_mass(0.3, 0.5))
        rep = direct_carleson_verdict(pair, mu, depth=10)
        assert rep.overall == "carleson-for-hb"
        assert rep.conditions["H2Window.mu"].verdict == "pass"

    def test_atom_at_mate_zero_is_killed(self, half_sum):
        mu = DiskMeasure.point_mass(np.exp(0j), 1.0).plus(DiskMeasure.lebesgue())
        rep = direct_carleson_verdict(half_sum, mu, depth=10)
        # the weighted measure drops the atom since |a(1)| = 0
        assert rep.overall == "carleson-for-hb"

    def test_nonrational_is_labelled_heuristic(self, alpha_pair):
        rep = direct_carleson_verdict(alpha_pair, DiskMeasure.lebesgue(), depth=8)
        assert rep.overall.startswith("heuristic-")
        assert "heuristic" in rep.diagnostics


class TestNormEquivalence:
    def test_alpha_example_passes(self, alpha_pair, inv_gap_measure):
        mu = inv_gap_measure.plus(DiskMeasure.point_mass(0.3, 1.0))
        rep = norm_equivalence_verdict(alpha_pair, mu, depth=10)
        assert rep.overall == "equivalent-norm"

    def test_halfsum_with_lebesgue_fails_on_window_inf(self, half_sum):
        rep = norm_equivalence_verdict(half_sum, DiskMeasure.lebesgue(), depth=10)
        assert rep.overall == "not-equivalent"
        assert rep.conditions["EquivNorm.window_inf"].verdict == "fail"

    def test_corona_failure_blocks(self):
        from hbspace.scenarios import build

        sc = build("blaschke-corona")
        rep = norm_equivalence_verdict(sc.pair, DiskMeasure.lebesgue(), depth=10)
        assert rep.overall == "not-equivalent"
        assert rep.conditions["EquivNorm.corona"].verdict == "fail"


class TestIsometry:
    def test_alpha_certificate(self, alpha_pair):
        cert = isometry_refutation(alpha_pair)
        assert cert["kind"] == "certificate"
        assert cert["index"] <= 16
        assert cert["coefficient_magnitude_squared"] > 1e-10

    def test_constant_branch(self):
        pair = pythagorean_mate(SymbolB.constant(0.5))
        cert = isometry_refutation(pair)
        assert cert["kind"] == "constant-symbol"
        assert cert["measure_scale"] == pytest.approx(1.0 / 0.75)

    def test_zero_symbol_gives_lebesgue(self):
        pair = pythagorean_mate(SymbolB.rational([0.0]))
        cert = isometry_refutation(pair)
        assert cert["kind"] == "constant-symbol"
        assert cert["measure_scale"] == pytest.approx(1.0)

    def test_requires_h2(self, half_sum):
        with pytest.raises(UnsupportedError):
            isometry_refutation(half_sum)


class TestSampling:
    def test_boundary_sequence_fails(self, alpha_pair):
        rep = sampling_refutation(alpha_pair, [1 - 2.0 ** (-n) for n in range(1, 9)],
                                  depth=8)
        assert rep.overall == "not-reverse-carleson"
        assert rep.constants["ess_inf"] == 0.0
        assert rep.kind == "sampling-refutation"

    def test_interior_sequence_for_h2(self):
        pair = pythagorean_mate(SymbolB.rational([0.0]))
        rep = sampling_refutation(pair, [0.1, 0.2 + 0.1j, -0.3], depth=6)
        assert rep.overall == "not-reverse-carleson"

    def test_random_interior_sequence(self, alpha_pair):
        rng = np.random.default_rng(4)
        pts = 0.8 * rng.uniform(0.1, 1, 6) * np.exp(2j * np.pi * rng.uniform(0, 1, 6))
        rep = sampling_refutation(alpha_pair, pts, depth=6)
        assert rep.overall == "not-reverse-carleson"


class TestFeasibility:
    def test_open_case_reported_as_open(self):
        # extreme, not inner, with the necessary integral finite: |b| = 1 on
        # (part of) the upper half circle and 1/2 elsewhere
        def modulus(t):
            t = np.asarray(t, dtype=float) % (2 * np.pi)
            upper = (t > 0.1) & (t < np.pi - 0.1)
            return np.where(upper, 1.0, 0.5)

        b = SymbolB.modulus_only(modulus)
        from hbspace.space import classify_extremeness

        ext = classify_extremeness(b)
        assert ext.verdict == "extreme"
        out = symbol_reverse_feasibility(b, ext)
        assert out["feasible"] == "open"

    def test_inner_is_out_of_scope(self):
        b = SymbolB.rational([0.0, 1.0])
        from hbspace.space import classify_extremeness

        out = symbol_reverse_feasibility(b, classify_extremeness(b))
        assert out["feasible"] == "out-of-scope"


class TestPoissonSquareLimit:
    def test_constant(self):
        table = poisson_square_limit_check(polynomial_fn([0.5j]), 1.0, [0.5, 0.9])
        for row in table["rows"]:
            assert row["value"] == pytest.approx(0.25, abs=1e-12)

    def test_monomial_exact_values(self):
        # integral of |r xi|^2 P_(r zeta)(xi) dm = r^2 exactly; convergence to
        # |q(zeta)|^2 = 1 at speed 1 - r^2
        table = poisson_square_limit_check(polynomial_fn([0.0, 1.0]), 0.0,
                                           [0.9, 0.99, 0.999, 0.9995])
        for row in table["rows"]:
            assert row["value"] == pytest.approx(row["r"] ** 2, rel=1e-9)
        assert table["rows"][-1]["error"] < 1e-3

    def test_halfsum_symbol_at_i(self):
        q = polynomial_fn([0.5, 0.5])
        table = poisson_square_limit_check(q, np.pi / 2, [0.99, 0.999])
        assert table["target"] == pytest.approx(0.5)
        assert table["rows"][-1]["value"] == pytest.approx(0.5, abs=2e-3)


class TestReportShape:
    def test_report_json_round_trip(self, half_sum):
        import json

        rep = direct_carleson_verdict(half_sum, DiskMeasure.radial_power(0.5), depth=8)
        text = json.dumps(rep.to_json(), sort_keys=True)
        doc = json.loads(text)
        assert "conditions" in doc and "constants" in doc and "witnesses" in doc

    def test_scan_csv_columns(self):
        scan = carleson_sup_scan(DiskMeasure.lebesgue(), depth=5, collect_table=True)
        lines = scan.table_csv().strip().splitlines()
        assert lines[0] == "level,arc_center,arc_length,value"
        assert len(lines) > 50


class TestSpecificSymbolCertificates:
    def test_one_minus_z_over_two_never_reverse(self):
        # the mirrored coefficients give the same non-integrable gap at z = -1
        pair = pythagorean_mate(SymbolB.rational([0.5, -0.5]))
        rep = reverse_carleson_verdict(pair, DiskMeasure.lebesgue(), depth=8,
                                       kernel_depth=6)
        assert rep.overall == "not-reverse-carleson"
        assert rep.conditions["Sarason.L1gap"].verdict == "fail"

    def test_poisson_resolution_cap(self):
        from hbspace.errors import ResolutionError
        from hbspace.functions import polynomial_fn

        with pytest.raises(ResolutionError):
            poisson_square_limit_check(polynomial_fn([0.0, 1.0]), 0.0, [1 - 1e-6],
                                       max_size=2 ** 14)
