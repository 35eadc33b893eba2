from fractions import Fraction

import pytest

from twinsieve import (
    BarKind,
    FeasibilityError,
    Interval,
    InvalidArgumentError,
    a_section_probe,
    beating_bars,
    bound_report,
    delta_bar,
    enumerate_omega,
    eta,
    gap_histogram,
    merged_gap_stats,
    origin_incongruence,
    overlap_census,
    pd1_check,
    period_census,
    period_section,
    phi,
    reduced_primorial,
    symmetry_check,
)
from twinsieve.stats import EQUAL, FEASIBLE_N, STRICT, VIOLATED


class TestPhiEtaDelta:
    def test_phi_examples(self, table):
        assert phi(table, 3) == 3
        assert phi(table, 5) == 135
        assert phi(table, 8) == 378_675

    def test_phi_recursion(self, table):
        for n in range(4, 40):
            p = int(table.primes[n - 1])
            assert phi(table, n) == phi(table, n - 1) * (p - 2)

    def test_eta_examples(self, table):
        assert eta(table, 3) == Fraction(3, 5)
        assert eta(table, 4) == Fraction(3, 7)
        assert eta(table, 5) == Fraction(27, 77)

    def test_delta_examples(self, table):
        assert delta_bar(table, 3) == Fraction(5, 3)
        assert delta_bar(table, 4) == Fraction(7, 3)
        assert delta_bar(table, 5) == Fraction(77, 27)

    def test_delta_is_phi_over_primorial_inverted(self, table):
        for n in range(3, 30):
            assert delta_bar(table, n) == Fraction(
                reduced_primorial(table, n), phi(table, n)
            )


class TestBoundReport:
    def test_equality_exactly_at_5_and_7(self, table):
        rows = bound_report(table, 50)
        for row in rows:
            if row.p in (5, 7):
                assert row.density_flag == EQUAL
                assert row.eta == row.three_over_p
            else:
                assert row.density_flag == STRICT
                assert row.eta > row.three_over_p

    def test_spacing_always_strict(self, table):
        for row in bound_report(table, 60):
            assert row.spacing_flag == STRICT
            assert 2 * row.delta_bar < row.d_n

    def test_square_bounds_kick_in_past_200(self, table):
        rows = bound_report(table, 60)
        for row in rows:
            if row.p > 200:
                assert row.sq_p_flag == STRICT
                assert row.sq_d_flag == STRICT
                assert row.delta_bar**2 < row.p
            else:
                assert row.sq_p_flag is None
                assert row.sq_d_flag is None

    def test_specific_values(self, table):
        rows = {row.n: row for row in bound_report(table, 6)}
        assert rows[5].eta == Fraction(27, 77)
        assert rows[5].three_over_p == Fraction(3, 11)  # 21/77 < 27/77
        assert rows[5].d_n == 8
        assert 2 * rows[5].delta_bar == Fraction(154, 27)

    def test_eta_strictly_decreasing(self, table):
        rows = bound_report(table, 80)
        for a, b in zip(rows, rows[1:]):
            assert b.eta < a.eta

    def test_no_violations(self, table):
        for row in bound_report(table, 100):
            assert VIOLATED not in (
                row.density_flag,
                row.spacing_flag,
                row.sq_p_flag,
                row.sq_d_flag,
            )


class TestPeriodCensus:
    def test_small_periods(self, table):
        for n, expected in ((3, 3), (4, 15), (5, 135)):
            report = period_census(table, n)
            assert report.expected == expected
            assert report.observed == expected
            assert report.match

    def test_n8_full_period(self, table):
        report = period_census(table, 8)
        assert report.expected == report.observed == 378_675

    def test_threaded_scan_matches(self, table):
        serial = period_census(table, 7)
        threaded = period_census(table, 7, threads=4, segment=1 << 14)
        assert serial == threaded

    def test_refuses_above_bound(self, table):
        with pytest.raises(FeasibilityError):
            period_census(table, FEASIBLE_N + 1)


class TestBeatingBars:
    def test_hand_checkable_case(self, table):
        count, events = beating_bars(table, 4, collect_events=True)
        assert count == 6
        assert [e.x for e in events] == [8, 13, 15, 20, 22, 27]
        assert all(e.n_new == 4 for e in events)
        assert all(e.kind in (BarKind.A_BAR, BarKind.B_BAR) for e in events)

    def test_balance_identity(self, table):
        for n_new in range(4, 8):
            count, _ = beating_bars(table, n_new)
            assert count == 2 * phi(table, n_new - 1)

    def test_events_strike_previous_survivors(self, table):
        from twinsieve import is_omega, nth_prime, psi

        _, events = beating_bars(table, 5, collect_events=True)
        p5 = nth_prime(table, 5)
        for e in events:
            assert is_omega(table, e.x, 4)
            assert psi(e.x, p5) == 0

    def test_rejects_n3(self, table):
        with pytest.raises(InvalidArgumentError):
            beating_bars(table, 3)

    def test_refuses_above_bound(self, table):
        with pytest.raises(FeasibilityError):
            beating_bars(table, FEASIBLE_N + 1)


class TestGapHistogram:
    def test_n3(self, table):
        hist = gap_histogram(table, 3)
        assert hist.gaps == {1: 1, 2: 2}
        assert hist.total_gaps == 3
        assert hist.mean == Fraction(5, 3)

    def test_n4(self, table):
        hist = gap_histogram(table, 4)
        assert hist.gaps == {1: 3, 2: 8, 3: 2, 5: 2}
        assert hist.total_gaps == 15
        assert sum(g * c for g, c in hist.gaps.items()) == 35
        assert hist.mean == Fraction(7, 3)

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
    def test_conservation_and_mean(self, table, n):
        hist = gap_histogram(table, n)
        assert hist.total_gaps == phi(table, n)
        assert sum(g * c for g, c in hist.gaps.items()) == reduced_primorial(table, n)
        assert hist.mean == delta_bar(table, n)

    def test_segment_boundaries_stitch_exactly(self, table):
        plain = gap_histogram(table, 6)
        chopped = gap_histogram(table, 6, segment=97, threads=3)
        assert plain == chopped


class TestMergedGaps:
    def test_n4_adjacent_bars_fuse_gaps(self, table):
        report = merged_gap_stats(table, 4)
        assert report.bar_count == 6
        # two pairs of adjacent strikes fall into shared gaps: only 4 fused gaps
        assert report.merged_gap_count == 4
        assert report.merged_total_length == 16
        assert report.mean == Fraction(4)
        assert report.predicted == Fraction(10, 3)
        assert report.deviation == Fraction(2, 3)

    def test_n5_prediction_exact(self, table):
        report = merged_gap_stats(table, 5)
        assert report.bar_count == 30
        assert report.merged_gap_count == 30
        assert report.mean == report.predicted == Fraction(14, 3)
        assert report.deviation == 0

    def test_gap_conservation_is_untouched(self, table):
        # fusing never changes the total: all depth-4 gaps still sum to 35
        hist = gap_histogram(table, 4)
        assert sum(g * c for g, c in hist.gaps.items()) == 35


class TestSymmetry:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_residues_closed_under_negation(self, table, n):
        assert symmetry_check(table, n)

    def test_n3_residues(self, table):
        positions = enumerate_omega(table, 3, Interval(1, 5))
        assert sorted(x % 5 for x in positions) == [0, 2, 3]

    def test_refuses_above_bound(self, table):
        with pytest.raises(FeasibilityError):
            symmetry_check(table, FEASIBLE_N + 1)


class TestOriginIncongruence:
    def test_examples(self, table):
        assert origin_incongruence(table, 3, 4)  # 8 mod 5 = 3 != 4
        assert origin_incongruence(table, 3, 5)  # 20 mod 5 = 0 != 4
        assert origin_incongruence(table, 4, 5)  # 20 mod 35 = 20 != 8

    def test_all_pairs_to_40(self, table):
        for n in range(4, 41):
            for m in range(3, n):
                assert origin_incongruence(table, m, n)

    def test_rejects_bad_order(self, table):
        with pytest.raises(InvalidArgumentError):
            origin_incongruence(table, 5, 5)
        with pytest.raises(InvalidArgumentError):
            origin_incongruence(table, 6, 4)


class TestPd1:
    def test_small_cases(self, table):
        for n in (3, 4, 20):
            assert pd1_check(table, n)

    def test_n3_decomposition_by_hand(self, table):
        # tail [8,8], five-blocks [9,13],[14,18],[19,23],[24,28],[29,33],[34,38],
        # shifted section [39,42]: together exactly the period [8,42]
        assert period_section(table, 4) == Interval(8, 42)
        assert pd1_check(table, 3)


class TestOverlap:
    def test_n3_reaches_into_next_section(self, table):
        report = overlap_census(table, 3)
        assert report.period_end == 8
        assert report.terminal_index == 4  # position 8 sits in [8, 19]
        assert report.spanned_sections == 1

    def test_n4(self, table):
        report = overlap_census(table, 4)
        assert report.period_end == 42
        assert report.terminal_index == 6  # origins 28 <= 42 < 48
        assert report.spanned_sections == 2

    def test_containment_invariant(self, table):
        from twinsieve import nth_prime, origin

        for n in range(3, 8):
            report = overlap_census(table, n)
            o_t = origin(nth_prime(table, report.terminal_index))
            o_t1 = origin(nth_prime(table, report.terminal_index + 1))
            assert o_t <= report.period_end < o_t1

    def test_n9_matches_published_reach(self, table):
        report = overlap_census(table, 9)
        assert report.terminal_index == 1748
        assert report.spanned_sections == 1739


class TestProbe:
    def test_first_sections(self, table):
        report = a_section_probe(table, 3, 4)
        assert report.counts == [(3, 2), (4, 4)]
        assert report.empty_sections == []

    def test_first_fifty_sections_nonempty(self, table):
        report = a_section_probe(table, 3, 50)
        assert report.empty_sections == []
        assert all(c >= 1 for _, c in report.counts)

    def test_counts_match_twin_enumeration(self, table):
        from twinsieve import a_section, enumerate_twin_generators

        report = a_section_probe(table, 5, 9)
        for n, count in report.counts:
            section, _ = a_section(table, n)
            assert count == len(enumerate_twin_generators(table, section))

    def test_rejects_bad_range(self, table):
        with pytest.raises(InvalidArgumentError):
            a_section_probe(table, 2, 5)
        with pytest.raises(InvalidArgumentError):
            a_section_probe(table, 6, 5)
