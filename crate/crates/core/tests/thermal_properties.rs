use otto_spin_core::thermo::{entropy_three_level, ln_partition_closed_form, Spectrum};
use proptest::prelude::*;

fn shannon(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|x| x * x.ln())
        .sum::<f64>()
}

fn naive_z(spec: &Spectrum, t: f64) -> f64 {
    spec.energies().iter().map(|e| (-e / t).exp()).sum()
}

#[test]
fn direct_summation_example() {
    let s = Spectrum::new(0.5, 1.3, 0.8).unwrap();
    let st = s.thermal_state(1.0).unwrap();
    let z = naive_z(&s, 1.0);
    for (p, e) in st.p.iter().zip(s.energies()) {
        assert!((p - (-e).exp() / z).abs() < 1e-15);
    }
    assert!((st.z - z).abs() < 1e-13 * z);
}

#[test]
fn extreme_ratios_stay_finite() {
    let s = Spectrum::new(300.0, 400.0, 350.0).unwrap();
    let st = s.thermal_state(1.0).unwrap();
    assert!(st.p.iter().all(|p| p.is_finite()));
    assert!(st.ln_z.is_finite() && st.s.is_finite() && st.u.is_finite());
    assert!((st.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn entropy_high_temperature_limit() {
    let s = Spectrum::new(0.0, 1.0, 0.0).unwrap();
    let v = s.entropy_gibbs(1e8).unwrap();
    assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-6);
}

#[test]
fn scale_property_exact() {
    for (r1, t) in [(1.3, 0.7), (2.0, 1.0), (0.37, 2.9)] {
        let base = Spectrum::new(0.0, r1, 0.0)
            .unwrap()
            .thermal_state(t)
            .unwrap()
            .p;
        for q in [2.0, 4.0, 0.5] {
            let scaled = Spectrum::new(0.0, q * r1, 0.0)
                .unwrap()
                .thermal_state(q * t)
                .unwrap()
                .p;
            assert_eq!(base, scaled, "q={q}");
        }
    }
}

#[test]
fn entropy_monotone_in_temperature() {
    for (jz, r1, r2) in [
        (0.7, 2.0, 1.1),
        (-1.5, 0.2, 3.0),
        (0.0, 0.0, 0.0),
        (2.0, 0.5, 0.5),
    ] {
        let s = Spectrum::new(jz, r1, r2).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=400 {
            let v = s.entropy_gibbs(0.02 * k as f64).unwrap();
            assert!(v >= prev - 1e-14, "({jz},{r1},{r2}) k={k}");
            prev = v;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn gibbs_entropy_is_shannon(jz in -5.0..5.0f64, r1 in 0.0..5.0f64, r2 in 0.0..5.0f64, t in 0.05..10.0f64) {
        let st = Spectrum::new(jz, r1, r2).unwrap().thermal_state(t).unwrap();
        prop_assert!((st.s - shannon(&st.p)).abs() < 1e-10);
    }

    #[test]
    fn partition_function_forms_agree(jz in -5.0..5.0f64, r1 in 0.0..5.0f64, r2 in 0.0..5.0f64, t in 0.1..10.0f64) {
        let s = Spectrum::new(jz, r1, r2).unwrap();
        let z = naive_z(&s, t);
        let closed = ln_partition_closed_form(&s, t).unwrap().exp();
        let st = s.thermal_state(t).unwrap();
        prop_assert!((closed - z).abs() <= 1e-12 * z);
        prop_assert!((st.z - z).abs() <= 1e-12 * z);
    }

    #[test]
    fn populations_normalised(jz in -50.0..50.0f64, r1 in 0.0..50.0f64, r2 in 0.0..50.0f64, t in 0.07..10.0f64) {
        let s = Spectrum::new(jz, r1, r2).unwrap();
        let st = s.thermal_state(t).unwrap();
        prop_assert!((st.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(st.p.iter().all(|&p| (0.0..=1.0).contains(&p)));
        let u: f64 = st.p.iter().zip(s.energies()).map(|(p, e)| p * e).sum();
        prop_assert!((st.u - u).abs() <= 1e-12 * (1.0 + u.abs()));
    }

    #[test]
    fn three_level_entropy_reduction(r1 in 0.0..20.0f64, t in 0.05..10.0f64) {
        let s = Spectrum::new(0.0, r1, 0.0).unwrap();
        prop_assert!((s.entropy_gibbs(t).unwrap() - entropy_three_level(r1 / t)).abs() < 1e-12);
    }

    #[test]
    fn free_energy_identity(jz in -3.0..3.0f64, r1 in 0.0..3.0f64, r2 in 0.0..3.0f64, t in 0.1..5.0f64) {
        let st = Spectrum::new(jz, r1, r2).unwrap().thermal_state(t).unwrap();
        prop_assert!((st.free_energy() - (st.u - t * st.s)).abs() < 1e-10);
    }
}
