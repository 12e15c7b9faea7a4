//! Runs a bundled recipe in memory and reads its written output back.
use psquid::cli::{
    figure_recipes, read_envelope, recipe, run_config, write_envelope, OutputFormat,
};

fn main() -> psquid::Result<()> {
    println!("recipes: {}", figure_recipes().join(", "));
    let cfg = recipe("fig2d")?;
    let envelope = run_config(&cfg)?;
    for t in &envelope.tables {
        println!(
            "table {} with columns {:?} and {} rows",
            t.name,
            t.columns,
            t.rows.len()
        );
    }
    let dir = tempfile::tempdir()?;
    let files = write_envelope(&envelope, dir.path(), OutputFormat::Json)?;
    let back = read_envelope(&files[0])?;
    println!(
        "read back {} bitwise equal: {}",
        files[0].display(),
        back.payload_bitwise_eq(&envelope)
    );
    Ok(())
}
