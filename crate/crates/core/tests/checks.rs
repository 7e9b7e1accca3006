use kdist::checks::*;

fn report(out: &[CheckOutcome]) -> String {
    out.iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{} obs={:e} tol={:e} {}", o.name, o.observed, o.tolerance, o.detail))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn parity_suite_passes() {
    let out = parity_suite(&CheckOptions::default());
    assert!(out.len() > 40);
    assert!(out.iter().all(|o| o.passed), "{}", report(&out));
}

#[test]
fn parity_suite_catches_perturbed_k0() {
    let out = parity_suite(&CheckOptions { k0_perturbation: 1e-3 });
    let failed: Vec<&str> = out.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect();
    assert!(failed.contains(&"specfun.k0"), "{failed:?}");
    assert!(failed.contains(&"specfun.k0_tail[x<=6]"), "{failed:?}");
    assert!(failed.iter().any(|n| n.starts_with("pdf[bessel")), "{failed:?}");
    assert!(failed.iter().any(|n| n.starts_with("cdf[bessel")), "{failed:?}");
}

#[test]
fn representations_suite_passes() {
    let out = representations_suite(&CheckOptions::default());
    assert!(out.iter().any(|o| o.name.contains("sum of two K")));
    assert!(out.iter().all(|o| o.passed), "{}", report(&out));
}
