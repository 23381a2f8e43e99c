// Calibration scan over (seed, lambda) for the reproduce pipeline
// (not part of the deliverable surface).
use epitv::commands::reproduce_with;
use epitv::presets::preset;
use epitv_core::synthesis::ScenarioName;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let scenario: ScenarioName = args
        .get(1)
        .map(|s| s.parse().unwrap())
        .unwrap_or(ScenarioName::TimeVaryingSirq);
    let lambdas: Vec<f64> = args
        .get(2)
        .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![8.0]);
    let seeds: Vec<u64> = args
        .get(3)
        .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
        .unwrap_or_else(|| vec![13]);
    let mut passes = 0;
    let mut total = 0;
    for &lambda in &lambdas {
        for &seed in &seeds {
            let mut p = preset(scenario);
            p.seed = seed;
            p.lambda = lambda;
            let out = std::env::temp_dir().join(format!("epitv-scan-{scenario}-{lambda}-{seed}"));
            let t0 = std::time::Instant::now();
            match reproduce_with(scenario, &out, &p) {
                Ok(pass) => {
                    total += 1;
                    passes += usize::from(pass);
                    println!(
                        "--- lambda={lambda} seed={seed} pass={pass} [{:.0}s]",
                        t0.elapsed().as_secs_f64()
                    );
                }
                Err(e) => println!("--- lambda={lambda} seed={seed} ERROR {e}"),
            }
            std::fs::remove_dir_all(&out).ok();
        }
    }
    println!("=== {passes}/{total} passes");
}
