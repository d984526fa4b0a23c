use dqpt_core::bloch::{normalize, BlochState, Vec3};
use dqpt_core::dynamics::{
    evolve, loschmidt_mode, return_probability, unitary_oracle, unitary_overlap, ModeQuench,
};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec3> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn state() -> impl Strategy<Value = BlochState> {
    vec3().prop_filter_map("zero vector", |v| {
        if v.norm() > 1e-3 {
            normalize(v).ok()
        } else {
            None
        }
    })
}

fn field() -> impl Strategy<Value = Vec3> {
    vec3().prop_filter("gapless", |v| v.norm() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_unitary(d_f in field(), t in 0.0..20.0f64, b_i in state()) {
        let m = ModeQuench::new(0.3, b_i, d_f).unwrap();
        let exact = evolve(&m, t).vector();
        let oracle = unitary_oracle(d_f, t, b_i).vector();
        prop_assert!(exact.max_abs_diff(oracle) < 1e-10, "{exact:?} vs {oracle:?}");

        let g = loschmidt_mode(&m, t);
        let o = unitary_overlap(d_f, t, b_i);
        prop_assert!((g.norm_sqr() - o.norm_sqr()).abs() < 1e-10);
        prop_assert!((return_probability(&m, t) - o.norm_sqr()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trajectories_stay_pure_and_conserve_axis_component(d_f in field(), b_i in state()) {
        let m = ModeQuench::new(1.0, b_i, d_f).unwrap();
        let along = b_i.dot(m.axis());
        for j in 0..200 {
            let b = evolve(&m, 0.05 * j as f64);
            prop_assert!((b.vector().norm() - 1.0).abs() < 1e-12);
            prop_assert!((b.dot(m.axis()) - along).abs() < 1e-12);
        }
    }
}
