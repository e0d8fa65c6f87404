use super::*;
use crate::netlist::{parse, validate_for_simulation, Circuit};

fn circuit(text: &str) -> Circuit {
    let netlist = parse(text).expect("fixture parses");
    validate_for_simulation(&netlist).expect("fixture validates")
}

fn transient(text: &str) -> Waveform {
    let c = circuit(text);
    run_transient(&c, &SolverConfig::for_circuit(&c)).expect("transient converges")
}

const RC: &str = "\
V1 in 0 DC 1.2
R1 in out 1k
C1 out 0 1p
.IC out=0
.TRAN 1p 5n
";

#[test]
fn divider_midpoint() {
    let c = circuit("V1 top 0 DC 1.2\nR1 top mid 1k\nR2 mid 0 1k\n.TRAN 1n 10n\n");
    let op = dc_operating_point(&c, &SolverConfig::default()).unwrap();
    assert!((op.voltage("mid").unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn source_current_sign_follows_spice() {
    let c = circuit("V1 a 0 DC 1\nR1 a 0 1k\n.TRAN 1n 10n\n");
    let op = dc_operating_point(&c, &SolverConfig::default()).unwrap();
    assert!((op.current("V1").unwrap() + 1e-3).abs() < 1e-12);
}

#[test]
fn memristor_operating_point() {
    let c = circuit("V1 a 0 DC 1\nYM1 a 0 w0=0.5\n.TRAN 1n 10n\n");
    let op = dc_operating_point(&c, &SolverConfig::default()).unwrap();
    let i = -op.current("V1").unwrap();
    assert!((i - 5.690e-4).abs() < 5e-7, "{i}");
}

#[test]
fn gate_only_node_solves() {
    let c = circuit("V1 vdd 0 DC 1.2\nR1 vdd d 10k\nMN1 d g 0 0\nR2 d 0 10k\n.TRAN 1n 10n\n");
    let op = dc_operating_point(&c, &SolverConfig::default()).unwrap();
    assert!(op.voltage("g").unwrap().abs() < 1e-9);
    assert!((op.voltage("d").unwrap() - 0.6).abs() < 1e-6);
}

#[test]
fn rc_step_matches_analytic() {
    let w = transient(RC);
    let v = w.voltage("out").unwrap();
    for (t, got) in w.times().iter().zip(v) {
        let exact = 1.2 * (1.0 - (-t / 1e-9).exp());
        assert!((got - exact).abs() <= 1e-3 * exact + 1e-12, "t={t} got={got} exact={exact}");
    }
}

#[test]
fn rc_grid_refinement() {
    let coarse = transient(RC);
    let fine = transient(&RC.replace(".TRAN 1p", ".TRAN 0.5p"));
    let (vc, vf) = (coarse.voltage("out").unwrap(), fine.voltage("out").unwrap());
    let worst = vc
        .iter()
        .enumerate()
        .map(|(k, v)| (v - vf[2 * k]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.01 * 1.2, "{worst}");
}

#[test]
fn linear_energy_balance() {
    let text = "\
V1 in 0 PULSE(0 1.2 0.1n 0.1n 0.1n 2n 4n)
R1 in out 1k
C1 out 0 1p
R2 out 0 4k
.TRAN 1p 8n
";
    let w = transient(text);
    let dt = w.dt();
    let vin = w.voltage("in").unwrap();
    let vout = w.voltage("out").unwrap();
    let i = w.current("V1").unwrap();
    let trapz = |f: &dyn Fn(usize) -> f64| -> f64 {
        (1..w.len()).map(|k| 0.5 * dt * (f(k - 1) + f(k))).sum()
    };
    let delivered = trapz(&|k| -vin[k] * i[k]);
    let dissipated = trapz(&|k| (vin[k] - vout[k]).powi(2) / 1e3 + vout[k].powi(2) / 4e3);
    let stored = 0.5 * 1e-12 * vout[w.len() - 1].powi(2);
    let balance = (delivered - dissipated - stored).abs() / delivered;
    assert!(balance < 5e-3, "{balance}");
}

#[test]
fn memristor_state_quasi_frozen_at_model_rates() {
    let w = transient("V1 a 0 SIN(0 1 100meg)\nR1 a b 1k\nYM1 b 0 w0=0.5\n.TRAN 10p 100n\n");
    let states = w.state("YM1").unwrap();
    assert!(states.iter().all(|s| (s - 0.5).abs() < 1e-9));
}

#[test]
fn zero_source_circuit_stays_at_zero() {
    let w = transient("R1 a 0 1k\nC1 a 0 1p\nR2 a b 1k\nC2 b 0 1p\n.TRAN 1p 1n\n");
    for name in ["a", "b"] {
        assert!(w.voltage(name).unwrap().iter().all(|v| *v == 0.0));
    }
}

#[test]
fn transient_is_deterministic() {
    let text = "\
VDD vdd 0 DC 1.2
VIN in 0 PULSE(0 1.2 1n 0.1n 0.1n 2n 4n)
.MODEL fast (tscale=1e13 wmargin=1e-3)
YM1 vdd out model=fast
MN1 out in 0 0 WL=40
C1 out 0 1f
.TRAN 10p 8n
";
    assert_eq!(transient(text), transient(text));
}

#[test]
fn memristor_states_stay_bounded() {
    let text = "\
V1 a 0 SIN(0 1.5 200meg)
.MODEL fast (tscale=1e14)
YM1 a 0 model=fast
.TRAN 10p 20n
";
    let w = transient(text);
    for (_, trace) in w.states() {
        assert!(trace.iter().all(|s| (0.0..=1.0).contains(s)));
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let c = circuit(
        "\
VDD vdd 0 DC 1.2
VIN in 0 DC 0.7
YM1 vdd out w0=0.4
YM2 in out w0=0.8
MN1 out in 0 0 WL=20
MP1 out in vdd vdd
C1 out 0 1f
.TRAN 1p 1n
",
    );
    let mna = Mna::new(&c);
    let n = mna.size();
    let prev = vec![0.0; n];
    let ctx = StampContext {
        time: 0.0,
        mode: Mode::Transient { dt: 1e-12, prev: &prev },
        gmin: 1e-12,
        source_scale: 1.0,
    };
    let states = mna.initial_states();
    let mut x: Vec<f64> = (0..n).map(|k| 0.3 + 0.17 * k as f64).collect();
    let residual = |x: &[f64], m: &mut DenseMatrix| {
        let mut rhs = vec![0.0; n];
        mna.assemble(x, &states, &ctx, m, &mut rhs).unwrap();
        let mut ax = vec![0.0; n];
        m.mul_vec(x, &mut ax);
        ax.iter().zip(&rhs).map(|(a, b)| a - b).collect::<Vec<_>>()
    };
    let mut jac = DenseMatrix::zeros(n);
    let f0 = residual(&x, &mut jac);
    let mut scratch = DenseMatrix::zeros(n);
    let h = 1e-6;
    for j in 0..n {
        x[j] += h;
        let f1 = residual(&x, &mut scratch);
        x[j] -= h;
        for i in 0..n {
            let fd = (f1[i] - f0[i]) / h;
            let an = jac.get(i, j);
            let tol = 1e-3 * an.abs().max(fd.abs()) + 1e-9;
            assert!((fd - an).abs() <= tol, "J[{i}][{j}] analytic {an} fd {fd}");
        }
    }
}

#[test]
fn resistor_network_matrix_is_symmetric() {
    let c = circuit("V1 a 0 DC 1\nR1 a b 1k\nR2 b c 2k\nR3 c 0 3k\nR4 b 0 5k\n.TRAN 1n 10n\n");
    let mna = Mna::new(&c);
    let n = mna.size();
    let mut m = DenseMatrix::zeros(n);
    let mut rhs = vec![0.0; n];
    let ctx = StampContext {
        time: 0.0,
        mode: Mode::Dc { force_ic: false },
        gmin: 1e-12,
        source_scale: 1.0,
    };
    mna.assemble(&vec![0.0; n], &[], &ctx, &mut m, &mut rhs).unwrap();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(m.get(i, j), m.get(j, i));
        }
    }
}

#[test]
fn csv_header_and_precision() {
    let w = transient("V1 in 0 DC 1.2\nR1 in out 1k\nC1 out 0 1p\n.TRAN 1p 3p\n");
    let csv = w.to_csv_string();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "time_s,v(in),v(out),i(V1)");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 4);
    let mantissa = row[1].split('e').next().unwrap();
    assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 9);
    assert_eq!(csv.lines().count(), 1 + w.len());
}

#[test]
fn missing_tran_is_reported() {
    let c = circuit("V1 a 0 DC 1\nR1 a 0 1k\n.TRAN 1n 2n\n");
    let config = SolverConfig::default();
    assert!(matches!(run_transient(&c, &config), Err(EngineError::MissingTran)));
}

#[test]
fn invalid_config_rejected() {
    let config = SolverConfig {
        gmin: 0.0,
        ..SolverConfig::default()
    };
    assert!(config.validate().is_err());
    let config = SolverConfig {
        dt: Some(2e-9),
        t_stop: Some(1e-9),
        ..SolverConfig::default()
    };
    assert!(config.validate().is_err());
}
