//! Quick invariant checks run by the `selftest` subcommand.

use crate::analytic::{ftilde_direct, pc_double_sum, pc_systematic, PeriodicStateSpec};
use crate::experiment::figure::{run_figure, FigureSpec};
use crate::experiment::output::render_csv;
use crate::gates::{ErrorMode, ErrorModel};
use crate::qft::{exact_dft, noisy_qft};
use crate::rng::RngStream;
use crate::shor::{success_probability, RecoveryPolicy, ShorInstance};
use crate::state::StateVector;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn random_state(num_qubits: usize, rng: &mut RngStream) -> StateVector {
    let amps: Vec<_> = (0..1usize << num_qubits)
        .map(|_| num_complex::Complex64::new(rng.standard_normal(), rng.standard_normal()))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
        .expect("power-of-two length")
}

fn oracle_equivalence() -> CheckOutcome {
    let mut rng = RngStream::new(0x5e1f, 0);
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..4 {
            let s = random_state(n, &mut rng);
            let gate = noisy_qft(&s, &ErrorModel::none(), &mut rng).output;
            let exact = exact_dft(&s).expect("small register");
            worst = worst.max(gate.max_abs_diff(&exact));
        }
    }
    check(
        "circuit matches direct DFT",
        worst < 1e-10,
        format!("max |diff| = {worst:.2e}"),
    )
}

fn norm_preservation() -> CheckOutcome {
    let mut rng = RngStream::new(0x5e1f, 1);
    let mut worst: f64 = 0.0;
    for mode in ErrorMode::ALL {
        let model = ErrorModel::with_magnitude(mode, 0.2).expect("valid magnitude");
        let s = random_state(6, &mut rng);
        let out = noisy_qft(&s, &model, &mut rng).output;
        worst = worst.max((out.norm_sqr() - 1.0).abs());
    }
    check(
        "noisy circuit is unitary",
        worst < 1e-10,
        format!("max |norm^2 - 1| = {worst:.2e}"),
    )
}

fn identity_chain() -> CheckOutcome {
    let mut rng = RngStream::new(0x5e1f, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let spec = PeriodicStateSpec::new(64, 4, (rng.next_u64() % 4) as usize).expect("valid");
        let c = (rng.next_u64() % 64) as usize;
        let delta = (rng.uniform() - 0.5) * 0.6;
        let direct = ftilde_direct(c, &spec, delta).norm_sqr();
        let closed = pc_systematic(c, &spec, delta);
        let zeros = vec![0.0; spec.terms()];
        let phases = vec![delta; spec.terms()];
        let double = pc_double_sum(c, &spec, &zeros, &phases).expect("lengths match");
        worst = worst
            .max((direct - closed).abs())
            .max((direct - double).abs());
    }
    check(
        "closed form = direct sum = double sum",
        worst < 1e-10,
        format!("max diff = {worst:.2e}"),
    )
}

fn ideal_figure() -> CheckOutcome {
    let data = run_figure(&FigureSpec::standard(1).expect("figure 1"));
    let ok = data.as_ref().is_ok_and(|d| {
        d.series[0].points.iter().all(|&(c, p)| {
            if c % 32 == 0 {
                (p - 0.25).abs() < 1e-10
            } else {
                p <= 1e-12
            }
        })
    });
    check(
        "error-free peaks at kq/r with height 1/r",
        ok,
        String::new(),
    )
}

fn systematic_peak() -> CheckOutcome {
    let spec = PeriodicStateSpec::new(128, 4, 0).expect("valid");
    let p = |c| pc_systematic(c, &spec, 0.05);
    let ok = p(127) > 0.1 && p(127) > p(126) && p(127) > p(0);
    check(
        "delta = 0.05 moves a peak to c = 127",
        ok,
        format!("P_127 = {:.4}", p(127)),
    )
}

fn figure_determinism() -> CheckOutcome {
    let mut spec = FigureSpec::standard(4).expect("figure 4");
    spec.seed = 1234;
    let a = run_figure(&spec).map(|d| render_csv(&d));
    let b = run_figure(&spec).map(|d| render_csv(&d));
    let ok = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    check("figure output is reproducible", ok, String::new())
}

fn ideal_shor() -> CheckOutcome {
    let inst = ShorInstance::new(15, 7).expect("valid instance");
    match success_probability(
        &inst,
        &ErrorModel::none(),
        RecoveryPolicy::Convergent,
        400,
        99,
    ) {
        Ok(est) => check(
            "N = 15, y = 7 succeeds half the time",
            est.contains(0.5),
            format!("p = {:.3} [{:.3}, {:.3}]", est.p, est.ci_low, est.ci_high),
        ),
        Err(e) => check("N = 15, y = 7 succeeds half the time", false, e.to_string()),
    }
}

pub fn run() -> Vec<CheckOutcome> {
    vec![
        oracle_equivalence(),
        norm_preservation(),
        identity_chain(),
        ideal_figure(),
        systematic_peak(),
        figure_determinism(),
        ideal_shor(),
    ]
}
