//! The JSON profiles shipped in `profiles/` must always parse, validate and
//! describe consistent time grids (running them is covered by the acceptance
//! suite and by hand; some take hours by design).

use std::path::PathBuf;

use nch::driver::RunConfig;

fn profiles_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../profiles")
}

#[test]
fn shipped_profiles_parse_and_validate() {
    let mut seen = 0;
    for entry in std::fs::read_dir(profiles_dir()).expect("profiles directory") {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        seen += 1;
        let cfg = RunConfig::load(&path)
            .unwrap_or_else(|e| panic!("{} does not validate: {e}", path.display()));

        // A study profile must put every refinement level on a time grid
        // that divides t_final exactly.
        if let Some(range) = cfg.time_levels {
            for k in range.k_min..=range.k_max {
                let tau_k = 0.1 * (0.5f64).powi(k as i32);
                let ratio = cfg.t_final / tau_k;
                assert!(
                    (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0),
                    "{}: t_final / tau_{k} = {ratio} is not an integer",
                    path.display()
                );
            }
        }
        if let Some(range) = cfg.space_levels {
            assert!(
                2usize.checked_pow(range.k_max).is_some(),
                "{}: space level {} overflows",
                path.display(),
                range.k_max
            );
        }
    }
    assert!(seen >= 5, "expected the shipped profiles, found {seen}");
}
