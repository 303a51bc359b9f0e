//! Prints the typo ledger as Markdown.
//!
//! ```text
//! cargo run --example typo_ledger
//! ```

use bulk_optomech::ledger::TypoLedger;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ledger = TypoLedger::build()?;
    print!("{}", ledger.to_markdown());
    Ok(())
}
