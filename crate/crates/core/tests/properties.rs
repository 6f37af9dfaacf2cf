use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use qif::bec::{protocol_state, select_internal, InternalState};
use qif::circuitfile::{execute, parse};
use qif::gaussian_oracle::{closed_form_stats, find_min_mean_c, MziParams};
use qif::interferometer::{run_mzi, PhaseSetting};
use qif::wavepacket::superpose;
use qif::{gaussian_init, GaussianParams, GridSpec, MomentumWavefunction};

fn unit() -> MomentumWavefunction {
    gaussian_init(GaussianParams::default(), GridSpec::default()).unwrap()
}

fn max_diff(a: &MomentumWavefunction, b: &MomentumWavefunction) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn grid_matches_closed_form(t in 0.0f64..=1.0, d in 0.0f64..2.0, a in 0.0f64..(2.0 * PI)) {
        let (c, dd) = run_mzi(&unit(), t, d, PhaseSetting::from_alpha(a)).unwrap();
        let s = closed_form_stats(&MziParams::new(t, d, a).unwrap());
        prop_assert!((c.probability - s.p_c).abs() <= 1e-10);
        prop_assert!((dd.probability - s.p_d).abs() <= 1e-10);
        if let (Some(x), Some(y)) = (c.mean_p, s.mean_c) {
            // Near-dark ports amplify the absolute error by 1/P_C.
            prop_assert!((x - y).abs() <= 1e-10 / c.probability.max(1e-3));
        }
        if let (Some(x), Some(y)) = (dd.mean_p, s.mean_d) {
            prop_assert!((x - y).abs() <= 1e-10 / dd.probability.max(1e-3));
        }
    }

    #[test]
    fn port_d_never_anomalous_at_zero_phase(t in 0.0f64..=1.0, d in 0.0f64..6.0) {
        let s = closed_form_stats(&MziParams::new(t, d, 0.0).unwrap());
        if let Some(m) = s.mean_d {
            prop_assert!(m >= -1e-12);
        }
    }

    #[test]
    fn half_turn_phase_exchanges_ports(t in 0.0f64..=1.0, d in 0.0f64..2.0) {
        let (c0, d0) = run_mzi(&unit(), t, d, PhaseSetting::from_alpha(0.0)).unwrap();
        let (c1, d1) = run_mzi(&unit(), t, d, PhaseSetting::from_alpha(PI)).unwrap();
        prop_assert!((c1.probability - d0.probability).abs() <= 1e-12);
        prop_assert!((d1.probability - c0.probability).abs() <= 1e-12);
    }

    #[test]
    fn phase_is_two_pi_periodic(t in 0.0f64..=1.0, d in 0.0f64..2.0, a in -PI..PI) {
        let s0 = closed_form_stats(&MziParams::new(t, d, a).unwrap());
        let s1 = closed_form_stats(&MziParams::new(t, d, a + 2.0 * PI).unwrap());
        prop_assert!((s0.p_c - s1.p_c).abs() <= 1e-12);
        prop_assert!((s0.first_moment_c - s1.first_moment_c).abs() <= 1e-12);
    }

    #[test]
    fn shifts_compose(d1 in -3.0f64..3.0, d2 in -3.0f64..3.0) {
        let wf = unit();
        let twice = wf.shift(d1).unwrap().shift(d2).unwrap();
        let once = wf.shift(d1 + d2).unwrap();
        prop_assert!(max_diff(&twice, &once) <= 1e-12);
    }

    #[test]
    fn shift_preserves_norm(d in -7.5f64..7.5) {
        let wf = unit();
        prop_assert!((wf.shift(d).unwrap().norm() - wf.norm()).abs() <= 1e-12);
    }

    #[test]
    fn parallelogram_rule(d in 0.0f64..3.0, phase in 0.0f64..(2.0 * PI)) {
        let f = unit();
        let g = f.shift(d).unwrap().scale(Complex64::from_polar(1.0, phase));
        let one = Complex64::new(1.0, 0.0);
        let plus = superpose(one, &f, one, &g).unwrap();
        let minus = superpose(one, &f, -one, &g).unwrap();
        let lhs = plus.norm() + minus.norm();
        let rhs = 2.0 * (f.norm() + g.norm());
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn atomic_protocol_depends_on_kick_difference(t in 0.0f64..=1.0, da in -2.0f64..2.0, db in -2.0f64..2.0, offset in -1.0f64..1.0) {
        let input = unit();
        let a = protocol_state(&input, t, da, db).unwrap();
        let b = protocol_state(&input, t, da + offset, db + offset).unwrap();
        prop_assert!(max_diff(a.component(InternalState::A), b.component(InternalState::A)) <= 1e-10);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn atomic_b_selection_is_shifted_port_d(t in 0.0f64..=1.0, da in -2.0f64..2.0, db in -2.0f64..2.0) {
        // The reversed kick leaves |B⟩ displaced by -δ relative to port D.
        let input = unit();
        let state = protocol_state(&input, t, da, db).unwrap();
        let b = select_internal(&state, InternalState::B);
        let (_, d) = run_mzi(&input, t, db - da, PhaseSetting::default()).unwrap();
        prop_assert!((b.probability - d.probability).abs() <= 1e-10);
        if let (Some(mb), Some(md)) = (b.mean_p, d.mean_p) {
            prop_assert!((mb - (md - (db - da))).abs() <= 1e-9);
        }
    }

    #[test]
    fn execution_is_deterministic(t in 0.0f64..=1.0, d in -2.0f64..2.0, a in -4.0f64..4.0) {
        let text = format!(
            "source width=1 mean=0\nbs t={t}\nkick path=B delta={d}\nphase path=B alpha={a}\nrecombine\nselect port=D\nreport moments\nreport conservation\n"
        );
        let prog = parse(&text).unwrap();
        let grid = GridSpec::default();
        prop_assert_eq!(execute(&prog, grid), execute(&prog, grid));
    }

    #[test]
    fn parser_never_panics(text in "[ -~\n\t]{0,200}") {
        let _ = parse(&text);
    }

    #[test]
    fn parser_never_panics_on_near_programs(lines in prop::collection::vec(
        prop_oneof![
            Just("source width=1 mean=0".to_string()),
            Just("bs t=0.5".to_string()),
            Just("recombine".to_string()),
            "(source|bs|kick|phase|select|report|recombine) ([a-z]{1,5}=[-+.eE0-9AB]{0,6} ?){0,3}",
        ],
        0..8,
    )) {
        let text = lines.join("\n");
        if let Err(e) = parse(&text) {
            prop_assert!(e.line >= 1 && e.line <= lines.len().max(1));
        }
    }
}

#[test]
fn minimum_over_figure_domain() {
    let best = find_min_mean_c((0.01, 0.99), (0.01, 2.0), 0.0, 400).unwrap();
    assert!(best.value <= -0.65);
    assert!(best.value > -1.0 / 2f64.sqrt());
    assert!(best.delta_over_w < 0.1);
}
