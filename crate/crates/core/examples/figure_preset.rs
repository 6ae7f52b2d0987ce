//! Runs a figure preset with few frames. Pass the preset name as the first
//! argument (default `fig5a`).

use maed::harness::{csv_string, figures};

fn main() -> maed::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig5a".into());
    let mut specs = figures::preset(&name, 10, 1)?;
    for s in &mut specs {
        s.snr_grid_db = vec![4.0, 12.0];
    }
    let records = figures::run(&name, &specs)?;
    print!("{}", csv_string(&records, false));
    Ok(())
}
