//! Load lifetimes from a text file (one value per line, `#` comments) and
//! fit them.

use std::error::Error;

use regmix::corpus::{load_file, Dataset};
use regmix::gof::build_report;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = std::env::temp_dir().join(format!("regmix_example_{}.txt", std::process::id()));
    let text = "# repair times in hours\n1.2\n0.4\n3.9\n2.2\n0.9\n5.1\n1.7\n2.8\n0.6\n4.4\n";
    std::fs::write(&path, text)?;
    let ds = load_file(&path)?;
    std::fs::remove_file(&path)?;
    println!("{} values, mean {:.3}", ds.count(), ds.mean());
    println!("{}", build_report(&ds, 3).to_table());

    let inline = Dataset::new("inline", vec![10.0, 12.5, 7.25, 30.0])?;
    print!("{}", inline.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
