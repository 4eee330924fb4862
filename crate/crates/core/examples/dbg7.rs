use puncvol_core::fields::VectorFieldSpec;
use puncvol_core::functionals::stokes_scan;
use puncvol_core::sphere::SpherePoint;
fn main() {
    let p = SpherePoint::axis(4, 3).unwrap();
    for d in [1u32, 2, 3] {
        let f = VectorFieldSpec::power(1, d, p.clone()).unwrap();
        let t = std::time::Instant::now();
        let scan = stokes_scan(&f, &p, &[-1.2, -0.8, -0.4, 0.0, 0.4, 0.8, 1.2], &[48, 96]).unwrap();
        println!("d={d}: dev={:.2e} north={:.6} south_ball={:.6} [{:?}]",
            scan.deviation, scan.north.ball_oriented, scan.south.ball_oriented, t.elapsed());
    }
}
