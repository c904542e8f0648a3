use std::io::Write;
use std::path::Path;

use tsurf_core::catalog::{catalog_entries, find_entry, verify_entry};
use tsurf_core::curvature::sample;
use tsurf_core::polynomial::{expected_power_family, exponent_grid, power_scan, rat, theorem1_scan, Rational};
use tsurf_core::{forms_at, CatalogError};

use crate::format;
use crate::surface_file::{read_surface_file, SurfaceFile};
use crate::{exit, CliError, Command, GridArgs, PolyscanArgs, PowerscanArgs, ReportArgs, VerifyArgs};

pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Field(args) => field(args, stdout),
        Command::Mesh(args) => mesh(args, stdout),
        Command::Verify(args) => verify(args, stdout, stderr),
        Command::Catalog(args) => catalog(args, stdout),
        Command::Polyscan(args) => polyscan(args, stdout, stderr),
        Command::Powerscan(args) => powerscan(args, stdout, stderr),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Output {
            path: "stdout".into(),
            source,
        }),
    }
}

fn load(args: &GridArgs) -> Result<(SurfaceFile, usize, usize), CliError> {
    let file =
        read_surface_file(&args.surface).map_err(|e| CliError::Usage(format!("{}: {e}", args.surface.display())))?;
    let (nu, nv) = match args.grid {
        Some(n) => (n as usize, n as usize),
        None => (file.grid.nu, file.grid.nv),
    };
    Ok((file, nu, nv))
}

fn field(args: &GridArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (file, nu, nv) = load(args)?;
    let s = &file.surface;
    let mut text = String::with_capacity(nu * nv * 320);
    text.push_str(format::FIELD_HEADER);
    text.push('\n');
    for (u, v) in s.domain().grid(nu, nv) {
        let eval = |e: &dyn std::fmt::Display| CliError::Evaluation(e.to_string());
        let z = s.height(u, v).map_err(|e| eval(&e))?;
        let b = forms_at(s, u, v).map_err(|e| eval(&e))?;
        let smp = sample(s, u, v).map_err(|e| eval(&e))?;
        format::field_row(&mut text, z, &b, &smp);
    }
    emit(&text, args.out.as_deref(), stdout)?;
    Ok(exit::SUCCESS)
}

fn mesh(args: &GridArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (file, nu, nv) = load(args)?;
    let s = &file.surface;
    let vertices = s
        .domain()
        .grid(nu, nv)
        .into_iter()
        .map(|(u, v)| {
            // curvature must also be evaluable for the mesh to be exported
            forms_at(s, u, v).map_err(|e| CliError::Evaluation(e.to_string()))?;
            let z = s.height(u, v).map_err(|e| CliError::Evaluation(e.to_string()))?;
            Ok((u, v, z))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    emit(&format::obj(&vertices, nu, nv), args.out.as_deref(), stdout)?;
    Ok(exit::SUCCESS)
}

fn catalog_error(e: CatalogError) -> CliError {
    match e {
        CatalogError::Geometry(_) | CatalogError::Curvature(_) => CliError::Evaluation(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    }
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let entries = match &args.entry {
        Some(name) => vec![find_entry(name).map_err(catalog_error)?],
        None => catalog_entries(),
    };
    let grid = args.grid as usize;
    let mut reports = Vec::with_capacity(entries.len());
    for entry in &entries {
        let params = entry
            .resolve(args.params.iter().map(|(k, v)| (k.as_str(), *v)))
            .map_err(catalog_error)?;
        reports.push(verify_entry(entry, &params, grid).map_err(catalog_error)?);
    }
    let mut text = String::new();
    if args.report.json {
        for r in &reports {
            text.push_str(&format::verify_json(r));
            text.push('\n');
        }
    } else {
        text.push_str(format::VERIFY_HEADER);
        text.push('\n');
        for r in &reports {
            text.push_str(&format::verify_row(r));
            text.push('\n');
        }
        let degenerate = reports.iter().filter(|r| r.relation.is_degenerate());
        let confirmed = degenerate.clone().filter(|r| r.pass).count();
        let relations = reports.iter().filter(|r| !r.relation.is_degenerate());
        let passed = relations.clone().filter(|r| r.pass).count();
        text.push_str(&format!(
            "{passed}/{} relations hold, {confirmed}/{} degenerate entries confirmed degenerate\n",
            relations.count(),
            degenerate.count()
        ));
    }
    emit(&text, args.report.out.as_deref(), stdout)?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).map(|r| r.name).collect();
    if failed.is_empty() {
        Ok(exit::SUCCESS)
    } else {
        let _ = writeln!(stderr, "verification failed: {}", failed.join(", "));
        Ok(exit::VERIFICATION)
    }
}

fn catalog(args: &ReportArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut text = String::new();
    if !args.json {
        text.push_str(format::CATALOG_HEADER);
        text.push('\n');
    }
    for e in catalog_entries() {
        text.push_str(&if args.json {
            format::catalog_json(&e)
        } else {
            format::catalog_row(&e)
        });
        text.push('\n');
    }
    emit(&text, args.out.as_deref(), stdout)?;
    Ok(exit::SUCCESS)
}

fn polyscan(args: &PolyscanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let report =
        theorem1_scan(args.max_m, args.max_n, args.draws, args.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = String::new();
    if args.report.json {
        for r in &report.rows {
            text.push_str(&format::scan_json(r));
            text.push('\n');
        }
    } else {
        text.push_str(format::SCAN_HEADER);
        text.push('\n');
        for r in &report.rows {
            text.push_str(&format::scan_row(r));
            text.push('\n');
        }
        let bad = report.counterexamples().count();
        text.push_str(&format!(
            "{} of {} numerators nonzero (degrees of f' up to {}, of g' up to {}, seed {})\n",
            report.rows.len() - bad,
            report.rows.len(),
            args.max_m,
            args.max_n,
            args.seed
        ));
    }
    emit(&text, args.report.out.as_deref(), stdout)?;
    if report.all_nonvanishing() {
        return Ok(exit::SUCCESS);
    }
    for r in report.counterexamples() {
        let _ = writeln!(stderr, "vanishing numerator: f' = {}, g' = {}", r.alpha, r.beta);
    }
    Ok(exit::VERIFICATION)
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("invalid coefficient `{text}`"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (text.trim().parse().map_err(|_| bad())?, 1i64),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(rat(n, d))
}

fn powerscan(args: &PowerscanArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let coeffs = args
        .coeffs
        .split(',')
        .filter(|c| !c.trim().is_empty())
        .map(parse_rational)
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(CliError::Usage("--coeffs is empty".into()));
    }
    let exponents = exponent_grid(args.denom, args.max_num);
    let solutions = power_scan(&exponents, &coeffs).map_err(|e| CliError::Usage(e.to_string()))?;
    let expected = expected_power_family(&exponents, &coeffs);
    let mut text = String::new();
    for s in &solutions {
        text.push_str(&if args.report.json {
            format::power_json(s)
        } else {
            format::power_row(s)
        });
        text.push('\n');
    }
    if !args.report.json {
        text.push_str(&format!(
            "{} solutions over {} exponent pairs x {} coefficient pairs\n",
            solutions.len(),
            exponents.len() * exponents.len(),
            coeffs.len() * coeffs.len()
        ));
    }
    emit(&text, args.report.out.as_deref(), stdout)?;
    if solutions == expected {
        Ok(exit::SUCCESS)
    } else {
        let _ = writeln!(stderr, "solution set differs from the (1/3, 1/3, a, -a) family");
        Ok(exit::VERIFICATION)
    }
}
