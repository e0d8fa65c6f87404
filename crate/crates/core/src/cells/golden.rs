use super::{CellError, CellKind, StimulusPlan};

/// Output of a combinational kind for one input combination.
pub fn truth_table(kind: CellKind, inputs: &[bool]) -> Option<bool> {
    let a = *inputs.first()?;
    let b = inputs.get(1).copied();
    Some(match (kind, b) {
        (CellKind::Not, None) => !a,
        (CellKind::And, Some(b)) => a && b,
        (CellKind::Or, Some(b)) => a || b,
        (CellKind::Nand, Some(b)) => !(a && b),
        (CellKind::Nor, Some(b)) => !(a || b),
        (CellKind::Xor, Some(b)) => a ^ b,
        _ => return None,
    })
}

/// Expected sampled output for every cycle of `plan`.
///
/// Gates evaluate their truth table per cycle and the latch reproduces its
/// input. Flip-flops start from `q0` and apply their characteristic
/// equation once per captured bit:
/// D: `q' = d`; T: `q' = t ^ q`; SR: `q' = s | (!r & q)`;
/// JK: `q' = (j & !q) | (!k & q)`.
pub fn golden_sequence(kind: CellKind, plan: &StimulusPlan, q0: bool) -> Result<Vec<bool>, CellError> {
    plan.validate(kind)?;
    let mut q = q0;
    let mut out = Vec::with_capacity(plan.cycles());
    for k in 0..plan.cycles() {
        let x = plan.combination(k);
        let bit = match kind {
            CellKind::DLatch => x[0],
            CellKind::DFf => {
                q = x[0];
                q
            }
            CellKind::TFf => {
                q ^= x[0];
                q
            }
            CellKind::SrFf => {
                q = x[0] || (!x[1] && q);
                q
            }
            CellKind::JkFf => {
                q = (x[0] && !q) || (!x[1] && q);
                q
            }
            gate => truth_table(gate, &x).expect("gate arity checked by validate"),
        };
        out.push(bit);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{default_stimulus, InputSequence};

    fn plan(kind: CellKind, columns: &[&[bool]]) -> StimulusPlan {
        let mut plan = default_stimulus(kind, 4, 0).unwrap();
        plan.inputs = kind
            .inputs()
            .iter()
            .zip(columns)
            .map(|(name, bits)| InputSequence {
                name: (*name).into(),
                bits: bits.to_vec(),
            })
            .collect();
        plan
    }

    #[test]
    fn t_flipflop_toggles() {
        let p = plan(CellKind::TFf, &[&[true; 4]]);
        assert_eq!(golden_sequence(CellKind::TFf, &p, false).unwrap(), [true, false, true, false]);
    }

    #[test]
    fn jk_holds_with_both_low() {
        for q0 in [false, true] {
            let p = plan(CellKind::JkFf, &[&[false; 5], &[false; 5]]);
            assert_eq!(golden_sequence(CellKind::JkFf, &p, q0).unwrap(), [q0; 5]);
        }
    }

    #[test]
    fn jk_set_reset_toggle() {
        let p = plan(CellKind::JkFf, &[&[true, false, true, true], &[false, true, true, true]]);
        assert_eq!(golden_sequence(CellKind::JkFf, &p, false).unwrap(), [true, false, true, false]);
    }

    #[test]
    fn sr_holds_and_resets() {
        let p = plan(CellKind::SrFf, &[&[true, false, false, false], &[false, false, true, false]]);
        assert_eq!(golden_sequence(CellKind::SrFf, &p, false).unwrap(), [true, true, false, false]);
    }

    #[test]
    fn d_flipflop_delays_by_one_edge() {
        let plan = default_stimulus(CellKind::DFf, 64, 11).unwrap();
        let golden = golden_sequence(CellKind::DFf, &plan, plan.initial_q).unwrap();
        assert_eq!(golden, plan.inputs[0].bits);
    }

    #[test]
    fn xor_truth() {
        let p = plan(CellKind::Xor, &[&[false, false, true, true], &[false, true, false, true]]);
        assert_eq!(golden_sequence(CellKind::Xor, &p, false).unwrap(), [false, true, true, false]);
    }

    #[test]
    fn sr_both_set_rejected() {
        let p = plan(CellKind::SrFf, &[&[true; 4], &[true; 4]]);
        assert!(golden_sequence(CellKind::SrFf, &p, false).is_err());
    }
}
