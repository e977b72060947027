use monofk_core::geometry::{ChartAtlas, ChartId, Point3};
use monofk_core::spectral::{fourier_bessel_forward, RadialGrid, SectionInD, SectionSpec, TermSpec};
use num_complex::Complex64;

fn parseval_and_round_trip(spec: &SectionSpec) -> (f64, f64) {
    let s = SectionInD::<f64>::from_spec(spec).unwrap();
    let term = &s.terms[0];
    let rule = RadialGrid::default().rule().unwrap();
    let psi = |r: f64| Complex64::new(term.radial(r).unwrap(), 0.0);
    let r_norm: f64 = rule.iter().map(|(r, w)| w * r * r * psi(r).norm_sqr()).sum();
    let k_norm = term.spectrum.norm_sqr();
    let back = fourier_bessel_forward(psi, term.mu, term.spectrum.nodes(), &rule).unwrap();
    let peak = term.spectrum.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sup = back.iter().zip(term.spectrum.samples()).fold(0.0f64, |m, (b, v)| m.max((b - v).norm()));
    ((r_norm - k_norm).abs() / k_norm, sup / peak)
}

#[test]
fn transform_is_unitary_for_higher_modes() {
    for spec in [SectionSpec::single(2, 3, 1, 0.5, 2.5), SectionSpec::single(0, 0, 0, 1.0, 2.0)] {
        let (parseval, round_trip) = parseval_and_round_trip(&spec);
        assert!(parseval < 1e-6, "{spec:?}: {parseval}");
        assert!(round_trip < 1e-6, "{spec:?}: {round_trip}");
    }
}

#[test]
fn semigroup_is_linear_in_the_section() {
    let term = |re: f64, im: f64, ell: i32| TermSpec { re, im, ell, m: 0, k_lo: 0.8, k_hi: 2.2, amplitude: 1.0 };
    let a = SectionSpec { n: 1, terms: vec![term(1.0, 0.0, 1)] };
    let b = SectionSpec { n: 1, terms: vec![term(0.0, 2.0, 2)] };
    let both = SectionSpec { n: 1, terms: vec![term(1.0, 0.0, 1), term(0.0, 2.0, 2)] };
    let atlas = ChartAtlas::<f64>::with_charge(1);
    let x = Point3::new(-0.4, 0.9, 0.3);
    let at = |spec: &SectionSpec| {
        let s = SectionInD::from_spec(spec).unwrap().semigroup_apply(0.3).unwrap();
        s.eval(&atlas, ChartId::Plus, &x).unwrap().value
    };
    assert!((at(&both) - at(&a) - at(&b)).norm() < 1e-14);
}

#[test]
fn norm_of_distinct_modes_adds() {
    let t = |ell: i32| TermSpec { re: 1.0, im: 0.0, ell, m: 1, k_lo: 1.0, k_hi: 3.0, amplitude: 1.0 };
    let one = SectionInD::<f64>::from_spec(&SectionSpec { n: 1, terms: vec![t(1)] }).unwrap().norm();
    let two = SectionInD::<f64>::from_spec(&SectionSpec { n: 1, terms: vec![t(2)] }).unwrap().norm();
    let both = SectionInD::<f64>::from_spec(&SectionSpec { n: 1, terms: vec![t(1), t(2)] }).unwrap().norm();
    assert!((both * both - one * one - two * two).abs() < 1e-12);
}
