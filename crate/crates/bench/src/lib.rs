//! Workloads shared by the criterion benches: prepared circuits so the
//! timed closures measure simulation only.

use memsim_core::cells::{default_stimulus, testbench, CellConfig, CellKind};
use memsim_core::netlist::{parse, validate_for_simulation, Circuit};

/// RC low-pass with a 1 ps step over 5 ns (5000 steps).
pub fn rc_circuit() -> Circuit {
    let netlist = parse("V1 in 0 DC 1.2\nR1 in out 1k\nC1 out 0 1p\n.IC out=0\n.TRAN 1p 5n\n").expect("valid netlist");
    validate_for_simulation(&netlist).expect("valid circuit")
}

/// Testbench for `kind` under the default seeded stimulus.
pub fn cell_circuit(kind: CellKind, cycles: usize) -> Circuit {
    let config = CellConfig::default();
    let plan = default_stimulus(kind, cycles, 1).expect("stimulus");
    let netlist = testbench(kind, &config, &plan).expect("testbench");
    validate_for_simulation(&netlist).expect("valid circuit")
}
