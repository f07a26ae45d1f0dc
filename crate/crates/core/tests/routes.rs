use chlattice::average::{averaged_count_from_orbit, averaged_count_wave_from_orbit, BumpProfile, WaveConfig};
use chlattice::chgeom::BallPoint;
use chlattice::lattice::{count_lattice_points, enumerate_orbit, samples, GroupSpec};
use chlattice::spectral::{main_term_a, SpectralData};
use num_complex::Complex64;

fn axis(n: usize, d: f64) -> BallPoint {
    BallPoint::on_first_axis(n, Complex64::new(d.tanh(), 0.0)).unwrap()
}

#[test]
fn both_routes_agree_on_a_free_group() {
    let g = samples::ping_pong(1, 1.0, 64);
    let b = BumpProfile::new(BallPoint::origin(1), 0.05).unwrap();
    let zp = axis(1, 0.3);
    let orbit = enumerate_orbit(&g, &b.center, &zp, 3.1).unwrap();
    assert!(!orbit.truncated);
    let cfg = WaveConfig::default();
    for t in [0.8, 1.3, 2.0, 2.6, 3.0] {
        let direct = averaged_count_from_orbit(&orbit, &b, t).unwrap();
        let wave = averaged_count_wave_from_orbit(&orbit, &b, t, &cfg).unwrap();
        assert!((direct.value - wave.value).abs() < 1e-6, "T={t}: {} vs {}", direct.value, wave.value);
        let lo = orbit.count(t - b.alpha).unwrap().count as f64;
        let hi = orbit.count(t + b.alpha).unwrap().count as f64;
        assert!(lo - 1e-9 <= direct.value && direct.value <= hi + 1e-9);
    }
}

#[test]
fn group_files_round_trip() {
    let g = samples::ping_pong(2, 1.2, 10);
    let back = GroupSpec::from_json(&g.to_json()).unwrap();
    let o = BallPoint::origin(2);
    let a = count_lattice_points(&g, &o, &o, 3.0).unwrap();
    let b = count_lattice_points(&back, &o, &o, 3.0).unwrap();
    assert_eq!(a.count, b.count);
    assert!(GroupSpec::from_json("{\"n\": 1}").is_err());
}

#[test]
fn modular_count_follows_the_main_term() {
    let text = r#"{"covolume": 0.2617993877991494, "entries": [{"lambda": -1.0, "phi": {"kind": "constant"}}]}"#;
    let data = SpectralData::from_json(text).unwrap();
    let o = BallPoint::origin(1);
    let orbit = enumerate_orbit(&samples::modular(), &o, &o, 4.0).unwrap();
    let r = orbit.count(4.0).unwrap().count as f64 / main_term_a(&data, 1, 4.0, &o, &o).unwrap();
    assert!((r - 1.0).abs() < 0.02, "{r}");
    assert!((main_term_a(&data, 1, 4.0, &o, &o).unwrap() - 3.0 * 8.0f64.exp()).abs() < 1e-9 * 3.0 * 8.0f64.exp());
}
