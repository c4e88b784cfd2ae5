use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use troplift_cli::{run, Command, Selection};

#[derive(Parser, Debug)]
#[command(name = "troplift", version, about = "Tropical lifts, lattice indices, fine monoids and scattering checks")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON artifact files.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Write the machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    subdivision: Option<String>,
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long)]
    cone: Option<String>,
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    hom: Option<String>,
    #[arg(long)]
    diagram: Option<String>,
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    up: Option<String>,
    #[arg(long)]
    down: Option<String>,
    /// Membership grid LO:HI for rank-2 puncturing monoids.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    grid: Option<(i64, i64)>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi || hi - lo > 200 {
        return Err("need LO <= HI and a range of at most 200".into());
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let a = Args::parse();
    troplift_core::par::init_threads();
    let sel = Selection {
        subdivision: a.subdivision,
        ty: a.ty,
        cone: a.cone,
        map: a.map,
        hom: a.hom,
        diagram: a.diagram,
        reference: a.reference,
        up: a.up,
        down: a.down,
        grid: a.grid,
    };
    let o = run(a.command, &a.files, &sel);
    if let Some(e) = &o.error {
        eprintln!("troplift: {e}");
    }
    print!("{}", o.text);
    if let (Some(path), Some(json)) = (&a.out, &o.json) {
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("troplift: writing {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::from(o.code as u8)
}
