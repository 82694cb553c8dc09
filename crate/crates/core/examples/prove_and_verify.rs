//! Run the whole proof, save the certificate, and re-check it from disk.

use fibcert::pipeline::{run_proof_with, verify_report_file, ProgressEvent, ProofConfig};

fn main() -> fibcert::Result<()> {
    let progress = |ev: ProgressEvent<'_>| {
        if let ProgressEvent::StageFinished(r) = ev {
            eprintln!("{} finished in {} ms", r.stage, r.wall_time_ms);
        }
    };
    let report = run_proof_with(&ProofConfig::default(), Some(&progress))?;
    print!("{}", report.to_text());

    let path = std::env::temp_dir().join("fibcert-report.json");
    std::fs::write(&path, report.to_json()?)?;
    match verify_report_file(&path) {
        Ok(()) => println!("\n{} re-verified", path.display()),
        Err(e) => println!("\n{} rejected: {e}", path.display()),
    }
    Ok(())
}
