use memsim_core::device::*;
use proptest::prelude::*;

fn table() -> MemristorParams {
    MemristorParams::default()
}

proptest! {
    #[test]
    fn current_vanishes_at_zero_bias(w in 0.0f64..=1.0) {
        prop_assert_eq!(memristor_current(w, 0.0, &table()).unwrap(), 0.0);
    }

    #[test]
    fn current_is_strictly_increasing(w in 1e-3f64..=1.0, v1 in -1.5f64..1.5, dv in 1e-3f64..0.5) {
        let v2 = (v1 + dv).min(1.5);
        prop_assume!(v2 > v1);
        let p = table();
        prop_assert!(memristor_current(w, v1, &p).unwrap() < memristor_current(w, v2, &p).unwrap());
    }

    #[test]
    fn state_rate_is_odd(w in 0.0f64..=1.0, v in -3.0f64..3.0) {
        let p = table();
        prop_assert_eq!(state_rate(w, -v, &p).unwrap(), -state_rate(w, v, &p).unwrap());
    }

    #[test]
    fn window_peaks_on_the_plateau(p in 1e-3f64..=10.0, w in 0.0f64..=1.0) {
        let plateau = p * 1.1f64.ln();
        prop_assert!(window(w, p).unwrap() <= plateau + 1e-15);
        prop_assert!(plateau <= 1.0);
        prop_assert_eq!(window(0.5, p).unwrap(), plateau);
    }

    #[test]
    fn conductance_matches_central_difference(w in 0.0f64..=1.0, v in prop_oneof![-1.5f64..-1e-3, 1e-3f64..1.5]) {
        let p = table();
        let h = 1e-6;
        let fd = (memristor_current(w, v + h, &p).unwrap() - memristor_current(w, v - h, &p).unwrap()) / (2.0 * h);
        let g = memristor_conductance(w, v, &p).unwrap();
        prop_assert!(g > 0.0);
        prop_assert!((g - fd).abs() <= 1e-4 * g.abs(), "g={} fd={}", g, fd);
    }

    #[test]
    fn state_never_leaves_the_unit_interval(
        w0 in 0.0f64..=1.0,
        drive in prop::collection::vec((-2.0f64..2.0, 1e-12f64..1e-8), 1..64),
    ) {
        let p = MemristorParams { time_scale: 1e14, ..table() };
        let mut w = w0;
        for (v, dt) in drive {
            w = advance_state(w, v, dt, &p).unwrap();
            prop_assert!((0.0..=1.0).contains(&w));
        }
    }

    #[test]
    fn opposite_drive_moves_state_oppositely(w in 0.3f64..0.7, v in 0.0f64..1.5, dt in 1e-3f64..1.0) {
        let p = MemristorParams { time_scale: 100.0, ..table() };
        let up = advance_state(w, v, dt, &p).unwrap() - w;
        let down = advance_state(w, -v, dt, &p).unwrap() - w;
        prop_assert!((up + down).abs() < 1e-14, "up={} down={}", up, down);
    }

    #[test]
    fn mosfet_current_is_continuous_across_saturation(vgs in 0.3f64..1.5, eps in 0.0f64..1e-9) {
        let n = MosfetParams::nmos();
        let edge = vgs - n.vth;
        let below = mosfet_current(&n, vgs, edge - eps);
        let above = mosfet_current(&n, vgs, edge + eps);
        prop_assert!((below - above).abs() <= 1e-6 * above.abs() + 1e-15);
    }
}

#[test]
fn state_integration_matches_fine_reference() {
    let p = table();
    let fast = advance_state(0.5, 1.0, 1.0, &p).unwrap();
    let steps = 1_000_000;
    let h = 1.0 / steps as f64;
    let mut w = 0.5;
    for _ in 0..steps {
        w += h * state_rate(w, 1.0, &p).unwrap();
    }
    assert!((fast - w).abs() < 1e-6, "{fast} vs {w}");
}

#[test]
fn unscaled_rate_example() {
    let r = state_rate(0.5, 1.0, &table()).unwrap();
    assert!((r - 9.531e-5).abs() < 1e-8, "{r}");
}

#[test]
fn invalid_parameters_are_named() {
    let err = validate_params(MemristorParams { p: 11.0, ..table() }).unwrap_err();
    assert!(err.to_string().contains("p"));
    let err = validate_params(MemristorParams { m: 4, ..table() }).unwrap_err();
    assert!(err.to_string().contains("m"));
}

#[test]
fn pulse_fall_midpoint() {
    let clock = SourceSpec::Pulse {
        v_low: 0.0,
        v_high: 1.2,
        delay: 0.0,
        rise: 0.1e-9,
        fall: 0.1e-9,
        width: 4.9e-9,
        period: 10e-9,
    };
    assert!((source_value(&clock, 5.05e-9) - 0.6).abs() < 1e-12);
}
