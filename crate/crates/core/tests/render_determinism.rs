use diskgroups::orbit::OrbitParams;
use diskgroups::render::{
    render_boundary, render_orbit, render_single_generator, BoundaryColoring, OrbitColoring,
    SingleColoring, Viewport,
};
use diskgroups::{DiskSystem, PlanePoint, Word};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn images_do_not_depend_on_thread_count() {
    let sys = DiskSystem::symmetric(5, 2.2).unwrap();
    let vp = Viewport::default_for(&sys, 200, 150).unwrap();
    let seeds = [sys.intersection_points()[0], PlanePoint::new(0.2, -0.1)];
    let params = OrbitParams::with_budget(100_000);
    let word: Word = "a b".parse().unwrap();
    let small = DiskSystem::symmetric(5, 1.05).unwrap();
    let bvp = Viewport::default_for(&small, 300, 300).unwrap();
    let render = || {
        let orbit = render_orbit(&sys, &seeds, &params, &vp, OrbitColoring::HitDensity).unwrap();
        let single = render_single_generator(&sys, &word, 5_000, None, &vp, SingleColoring::Density, 1e-9).unwrap();
        let order = render_single_generator(&sys, &word, 200, None, &vp, SingleColoring::OrbitOrder, 1e-9).unwrap();
        let bound = render_boundary(&small, 128, 100_000, &bvp, BoundaryColoring::RegionSize).unwrap();
        [orbit.image, single.image, order.image, bound.image].map(|i| i.to_ppm_bytes())
    };
    let one = in_pool(1, render);
    let many = in_pool(4, render);
    for (a, b) in one.iter().zip(&many) {
        assert!(a == b);
    }
}
