use wsfbm_core::bench::{run_bench, BenchConfig};
use wsfbm_core::inference::Family;
use wsfbm_core::kernels::GramMethod;

#[test]
fn reference_configurations_agree_across_methods() {
    for (family, a) in [(Family::C1, 0.21), (Family::C2, 0.21), (Family::C2, -0.6)] {
        let cfg = BenchConfig { repeats: 1, ..BenchConfig::new(family, a, 1.28, vec![100], GramMethod::ALL.to_vec()) };
        let r = run_bench(&cfg).unwrap();
        assert_eq!(r.diffs.len(), 6);
        for d in &r.diffs {
            assert!(d.max_coord_diff <= 1e-4, "{family:?} a={a}: {d:?}");
        }
    }
}

#[test]
fn closed_form_is_faster_than_gauss_kronrod_at_400() {
    // local timing with a wide margin (the observed ratio is above 10)
    let cfg = BenchConfig::new(Family::C1, 0.21, 1.28, vec![400], vec![GramMethod::GaussKronrod, GramMethod::ClosedForm]);
    let r = run_bench(&cfg).unwrap();
    assert_eq!(r.speedups.len(), 1);
    assert!(r.speedups[0].ratio > 1.0, "{:?}", r.speedups);
}

#[test]
fn report_tables_have_headers_and_rows() {
    let cfg = BenchConfig {
        repeats: 2,
        ..BenchConfig::new(Family::C2, -0.6, 1.28, vec![20, 40], vec![GramMethod::GaussKronrod, GramMethod::ClosedForm])
    };
    let r = run_bench(&cfg).unwrap();
    let t = r.timing_csv();
    assert!(t.starts_with("method,n,seconds\n"));
    assert_eq!(t.lines().count(), 5);
    assert_eq!(r.accuracy_csv().lines().count(), 2);
    assert_eq!(r.speedup_csv().lines().count(), 3);
    assert!(r.timings.iter().all(|x| x.seconds > 0.0));
}
