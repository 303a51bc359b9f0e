//! Writes every figure dataset as CSV into a directory (default `figures`).

use bulk_optomech::sweep::{figure_dataset, Figure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    std::fs::create_dir_all(&dir)?;
    for &fig in Figure::ALL {
        for curve in figure_dataset(fig)? {
            let name = format!("{dir}/{fig}_{}.csv", curve.label.replace('=', "_"));
            std::fs::write(&name, curve.result.to_csv())?;
            let peak = curve.result.argmax(curve.observable);
            println!("{name}: trend {:?}, peak {peak:?}", curve.result.trend(curve.observable));
        }
    }
    Ok(())
}
