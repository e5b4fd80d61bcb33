use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nefcert::cohomology::cartier_manin;
use nefcert::fields::Field;
use nefcert::hyperelliptic::Curve;
use nefcert::jacobian::jac_order_guarded;
use nefcert::obstruction::{certificate_build, certificate_verify_json, Budget, VerificationReport};
use nefcert::surface_lattice::{
    blowup_lattice, exceptional_curves, hodge_signature, orthogonal_quotient, plane_example, rankin_extremal,
    ruling_example, Base, RayAlternative,
};
use nefcert::Error;

#[derive(Parser, Debug)]
#[command(name = "nefcert", version, about = "Certificates for nef, non-semi-ample line bundles on blown-up quadrics")]
struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a certificate over an extension of F_p.
    Search(SearchArgs),
    /// Verify a certificate file.
    Verify {
        /// Certificate JSON file.
        file: PathBuf,
    },
    /// Exceptional-curve data for the blown-up quadric or plane.
    Lattice {
        #[arg(long, default_value = "p1xp1")]
        base: String,
        /// Number of blown-up points.
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Diagnostics for y^2 = f(x).
    CurveInfo {
        #[arg(long)]
        p: u64,
        /// Extension degree of the coefficient field.
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Integer coefficients of f from x^5 down to the constant term.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
        /// Largest field size enumerated when counting points.
        #[arg(long, default_value_t = nefcert::hyperelliptic::DEFAULT_COUNT_GUARD)]
        guard: u64,
    },
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Where to write the certificate (or failure report); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = Budget::default().curves)]
    curves: usize,
    #[arg(long, default_value_t = Budget::default().curves_per_field)]
    curves_per_field: usize,
    #[arg(long, default_value_t = Budget::default().delta_rounds)]
    delta_rounds: usize,
}

fn emit(format: Format, text: &str, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
    }
}

fn search(format: Format, a: &SearchArgs) -> Result<ExitCode, Error> {
    let budget = Budget {
        curves: a.curves,
        curves_per_field: a.curves_per_field,
        delta_rounds: a.delta_rounds,
        ..Budget::default()
    };
    let config = json!({"command": "search", "p": a.p, "seed": a.seed, "out": a.out, "budget": budget});
    let (artifact, code, summary) = match certificate_build(a.p, a.seed, &budget) {
        Ok(cert) => {
            let s = format!(
                "certificate found over F_{} (k = {}), obstruction index {}\nsearch: {}\n",
                cert.q, cert.k, cert.obstruction, cert.search
            );
            (cert.to_json(), ExitCode::SUCCESS, s)
        }
        Err(Error::BudgetExhausted(stats)) => {
            let report = json!({"status": "failed", "reason": "budget exhausted", "p": a.p, "seed": a.seed, "stats": stats});
            let s = format!("no certificate within budget\nsearch: {stats}\n");
            (serde_json::to_string_pretty(&report).expect("json"), ExitCode::from(1), s)
        }
        Err(e) => return Err(e),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, format!("{artifact}\n"))
                .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))?;
            let text = format!("config: {config}\n{summary}written to {}\n", path.display());
            emit(format, &text, json!({"config": config, "summary": summary.trim_end(), "out": path}));
        }
        None => {
            let text = format!("config: {config}\n{summary}{artifact}\n");
            let parsed: Value = serde_json::from_str(&artifact).expect("json");
            emit(format, &text, json!({"config": config, "summary": summary.trim_end(), "artifact": parsed}));
        }
    }
    Ok(code)
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("[{mark}] ({}) {}: {}\n", c.index, c.name, c.detail));
    }
    s.push_str(if r.passed() { "certificate valid\n" } else { "certificate rejected\n" });
    s
}

fn verify(format: Format, file: &PathBuf) -> ExitCode {
    let config = json!({"command": "verify", "file": file});
    let contents = match std::fs::read_to_string(file) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    match certificate_verify_json(&contents) {
        Ok(r) => {
            let text = format!("config: {config}\n{}", report_text(&r));
            emit(format, &text, json!({"config": config, "valid": r.passed(), "checks": r.checks}));
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("malformed certificate: {e}");
            emit(format, "", json!({"config": config, "error": e.to_string()}));
            ExitCode::from(2)
        }
    }
}

fn lattice(format: Format, base: &str, d: usize) -> Result<ExitCode, Error> {
    let base: Base = base.parse()?;
    let config = json!({"command": "lattice", "base": format!("{base:?}").to_lowercase(), "d": d});
    let (lat, l, curves) = match base {
        Base::P1xP1 => ruling_example(d),
        Base::P2 => plane_example(d),
    };
    let rep = exceptional_curves(&lat, &l, &curves, RayAlternative::General)?;
    let sig = hodge_signature(&blowup_lattice(base, d))?;
    let q = orthogonal_quotient(&lat, &l)?;
    let rho = rep.picard_number;
    let mut text = format!("config: {config}\n");
    text.push_str(&format!("Picard number rho = {rho}\n"));
    text.push_str(&format!("Hodge signature = ({}, {})\n", sig.0, sig.1));
    text.push_str(&format!("L = {:?}, L^2 = {}\n", l.coords, lat.intersect(&l, &l)?));
    text.push_str(&format!(
        "{} exceptional curves with L.A = 0 off the ray (bound {}), {} on the ray\n",
        rep.negative.len(),
        rep.bound,
        rep.ray.len()
    ));
    for &i in &rep.negative {
        let a = &curves[i];
        text.push_str(&format!("  {:?}  A^2 = {}\n", a.coords, lat.intersect(a, a)?));
    }
    text.push_str(&format!(
        "quotient V has dimension {} (negative definite: {})\n",
        q.dim(),
        q.is_negative_definite()
    ));
    let mut extremal = Vec::new();
    for dim in 1..=q.dim().min(3) {
        let ns = rankin_extremal(dim, false)?;
        let st = rankin_extremal(dim, true)?;
        text.push_str(&format!(
            "Rankin brute force dim {dim}: {ns} <= {} (non-strict), {st} <= {} (strict)\n",
            2 * dim,
            dim + 1
        ));
        extremal.push(json!({"dim": dim, "nonstrict": ns, "strict": st}));
    }
    if let Some(r) = &rep.rankin {
        text.push_str(&format!("Rankin check on V: {} vectors, bound {}, holds: {}\n", r.size, r.bound, r.holds));
    }
    let value = json!({
        "config": config,
        "picard_number": rho,
        "signature": [sig.0, sig.1],
        "exceptional": rep.negative.iter().map(|&i| curves[i].coords.clone()).collect::<Vec<_>>(),
        "exceptional_count": rep.negative.len(),
        "ray_count": rep.ray.len(),
        "bound": rep.bound,
        "quotient_dim": q.dim(),
        "rankin": rep.rankin.as_ref().map(|r| json!({"size": r.size, "bound": r.bound, "holds": r.holds})),
        "rankin_extremal": extremal,
    });
    emit(format, &text, value);
    Ok(ExitCode::SUCCESS)
}

fn curve_info(format: Format, p: u64, k: u32, coeffs: &[i64], guard: u64) -> Result<ExitCode, Error> {
    let config = json!({"command": "curve-info", "p": p, "k": k, "f": coeffs, "guard": guard});
    let field = Field::new(p, k)?;
    let low_to_high: Vec<i64> = coeffs.iter().rev().copied().collect();
    let curve = Curve::from_ints(&field, &low_to_high)?;
    let (cm, ordinary) = cartier_manin(&curve);
    let n1 = curve.point_count_guarded(1, guard)?;
    let n2 = curve.point_count_guarded(2, guard)?;
    let fr = jac_order_guarded(&curve, guard)?;
    let show = |a| field.display(a);
    let cm_text = format!("[[{}, {}], [{}, {}]]", show(cm[0][0]), show(cm[0][1]), show(cm[1][0]), show(cm[1][1]));
    let text = format!(
        "config: {config}\ncurve: y^2 = {}\ngenus: {}\nsmooth: true\n#C(F_q) = {n1}\n#C(F_q^2) = {n2}\n\
         Cartier-Manin: {cm_text}\nordinary: {ordinary}\nFrobenius charpoly: {:?}\n#J(F_q) = {}\n",
        curve.f(),
        curve.genus(),
        fr.charpoly,
        fr.jacobian_order
    );
    let value = json!({
        "config": config,
        "curve": curve.f().to_string(),
        "genus": curve.genus(),
        "points": [n1, n2],
        "cartier_manin": [[show(cm[0][0]), show(cm[0][1])], [show(cm[1][0]), show(cm[1][1])]],
        "ordinary": ordinary,
        "charpoly": fr.charpoly,
        "jacobian_order": fr.jacobian_order,
    });
    emit(format, &text, value);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Search(a) => search(cli.format, a),
        Command::Verify { file } => Ok(verify(cli.format, file)),
        Command::Lattice { base, d } => lattice(cli.format, base, *d),
        Command::CurveInfo { p, k, f, guard } => curve_info(cli.format, *p, *k, f, *guard),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
