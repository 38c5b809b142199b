mod common;

use common::{suite, suite_states};
use dirac_morse::wavefunctions::{component_at_r, default_quadrature, normalize, BoundState};

fn normalized_suite() -> Vec<BoundState> {
    suite()
        .iter()
        .flat_map(suite_states)
        .map(|s| {
            let state = BoundState::new(&s.problem, s.center, s.offset, s.n).unwrap();
            normalize(&state, &default_quadrature(&state)).unwrap()
        })
        .collect()
}

/// Worst |component| on `r ∈ [start, start + 50/a]`.
fn tail_max(state: &BoundState, start: f64) -> f64 {
    (0..=2000)
        .map(|i| start + 50.0 / state.width * i as f64 / 2000.0)
        .map(|r| component_at_r(state, r).unwrap().abs())
        .fold(0.0, f64::max)
}

#[test]
fn decay_beyond_forty_w1_lengths() {
    // large r means s -> 0, where the component goes as N s^w1 = N e^{-a w1 (r - r0)};
    // 40 lengths leave room for norms up to ~1e5
    for state in normalized_suite() {
        let start = state.r0 + 40.0 / (state.width * state.w1);
        let worst = tail_max(&state, start);
        assert!(worst < 1e-12, "{state:?}: {worst:e}");
    }
}

/// The tail length 30/(a w2) is too short whenever w1 < w2, which holds for
/// every suite state; this records how often it falls short.
#[test]
fn decay_length_census() {
    let states = normalized_suite();
    let failing: Vec<(f64, f64, f64)> = states
        .iter()
        .filter_map(|s| {
            let worst = tail_max(s, s.r0 + 30.0 / (s.width * s.w2));
            (worst >= 1e-12).then_some((s.w1, s.w2, worst))
        })
        .collect();
    println!(
        "{} of {} states exceed 1e-12 beyond r0 + 30/(a w2): {failing:?}",
        failing.len(),
        states.len()
    );
    assert!(failing.iter().all(|&(w1, w2, _)| w1 < w2));
}
