use davenport_core::counting::prop6_coefficient;
use davenport_core::rate::{evaluate, mrrw1_objective, RateBoundKind};
use davenport_core::recursion::{asymptotic_profile, coefficient_sequence, corollary_bound, BoundNature, Schedule};
use RateBoundKind::*;

const SLACK: f64 = 1e-9;

fn grid() -> impl Iterator<Item = f64> {
    (0..1000).map(|i| 0.5 * i as f64 / 999.0)
}

#[test]
fn rate_bounds_are_ordered() {
    for delta in grid() {
        let v = |k| evaluate(k, delta).unwrap();
        assert!(v(GvHeuristic) <= v(Mrrw1) + SLACK, "delta = {delta}");
        assert!(v(Mrrw1) <= v(EliasBassalygo) + SLACK, "delta = {delta}");
        assert!(v(EliasBassalygo) <= v(Hamming) + SLACK, "delta = {delta}");
        assert!(v(Mrrw1) <= v(Mrrw2) + SLACK, "delta = {delta}");
        assert!((mrrw1_objective(delta, 0.0) - v(EliasBassalygo)).abs() <= SLACK);
    }
}

#[test]
fn rate_bounds_are_monotone_and_in_range() {
    for kind in RateBoundKind::ALL {
        let values: Vec<f64> = grid().map(|d| evaluate(kind, d).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{kind}");
        assert!(values.iter().all(|v| (0.0..=1.0).contains(v)), "{kind}");
    }
}

#[test]
fn evaluation_is_bit_deterministic() {
    for kind in RateBoundKind::ALL {
        for delta in [0.0, 0.013, 0.25, 0.4999] {
            assert_eq!(evaluate(kind, delta).unwrap().to_bits(), evaluate(kind, delta).unwrap().to_bits());
        }
    }
}

/// Brute force: a 200k-point scan of the MRRW1 objective never beats the
/// grid + golden-section minimum by more than the evaluator tolerance.
#[test]
fn mrrw1_minimum_against_dense_scan() {
    for delta in [0.02, 0.05, 0.1, 0.15, 0.2, 0.26, 0.3, 0.45] {
        let hi = 1.0 - 2.0 * delta;
        let dense = (0..=200_000)
            .map(|i| mrrw1_objective(delta, hi * i as f64 / 200_000.0))
            .fold(f64::INFINITY, f64::min);
        let v = evaluate(Mrrw1, delta).unwrap();
        assert!(v <= dense + 1e-10, "delta = {delta}: {v} vs {dense}");
        assert!(v >= dense - 1e-7, "delta = {delta}: {v} vs {dense}");
    }
}

#[test]
fn schedules_are_ordered() {
    let j_max = 10;
    let t = |s: Schedule| coefficient_sequence(&s, j_max).unwrap();
    let (m1, mixed, ham, gv) = (t(Schedule::mrrw1()), t(Schedule::mixed_f2f3()), t(Schedule::hamming()), t(Schedule::gv_heuristic()));
    for j in 1..=j_max {
        let c = |tab: &davenport_core::recursion::CoefficientTable| tab.cumulative(j).unwrap();
        assert!(c(&m1) <= c(&mixed) + SLACK, "j = {j}");
        assert!(c(&mixed) <= c(&ham) + SLACK, "j = {j}");
        assert!(c(&gv) <= c(&m1) + SLACK, "j = {j}");
    }
    assert_eq!(gv.nature, BoundNature::Heuristic);
    assert_eq!(m1.nature, BoundNature::Upper);
}

#[test]
fn rows_satisfy_their_equation_and_beat_the_lower_bound() {
    for schedule in Schedule::presets() {
        let table = coefficient_sequence(&schedule, 12).unwrap();
        for w in table.rows.windows(2) {
            assert!(w[1].cumulative > w[0].cumulative);
        }
        for row in &table.rows[1..] {
            assert!(row.residual.abs() <= 1e-9, "{schedule} j = {}", row.j);
            assert!(row.increment > 0.0 && row.increment < 1.0, "{schedule} j = {}", row.j);
            if schedule.nature() == BoundNature::Upper {
                assert!(row.cumulative > prop6_coefficient(row.j), "{schedule} j = {}", row.j);
            }
        }
    }
}

#[test]
fn hamming_increments_stay_below_one() {
    let p = asymptotic_profile(2000).unwrap();
    assert!(p.max_increment <= 1.0);
    assert!(p.min_increment > 0.0);
    assert!(p.rows.iter().all(|r| r.increment <= 1.0));
    // V_j should stay between the lower coefficient and j.
    for row in &p.rows {
        assert!(row.cumulative > prop6_coefficient(row.j) && row.cumulative < row.j as f64);
    }
}

#[test]
fn corollary_scales_the_table() {
    let c = corollary_bound(1000, 5, &Schedule::mrrw1()).unwrap();
    assert!((c.value - 2478.0).abs() <= 1.0, "{}", c.value);
    assert!(c.asymptotic_in_r);
    let h = corollary_bound(100, 50, &Schedule::hamming()).unwrap();
    let table = coefficient_sequence(&Schedule::hamming(), 50).unwrap();
    assert_eq!(h.value, table.cumulative(50).unwrap() * 100.0);
}
