use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use chiroptica::elements::{
    absorbed_intensity, analyzer, propagate, rotation_biot, rotator, transmitted_intensity,
    ChiralSample, Handedness,
};
use chiroptica::geometric::{chiral_phases, pancharatnam_phase};
use chiroptica::polarimetry::{
    build_series, derive_record, emit_plot, fit_biot, group_by_sample, parse_measurements,
    synth_sweep_with, validate_measurements, write_derived, write_measurements, FitMode,
    MeasurementRecord, PlotFormat, PlotOptions, SweepOptions, YKind,
};
use chiroptica::polarization::{linear_state, Intensity, PolarizationState};
use chiroptica::Complex;
use serde_json::{json, Value};

use crate::{
    AngleUnit, Cli, Command, Failure, FitArgs, Format, GlobalArgs, Hand, InputArgs, Kind, PlotArgs,
    SimulateArgs, SweepArgs,
};

type Outcome = Result<u8, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Simulate(a) => simulate(g, a),
        Command::Derive(a) => derive(g, a),
        Command::Fit(a) => fit(g, a),
        Command::Sweep(a) => sweep(g, a),
        Command::Plot(a) => plot(g, a),
        Command::Validate(a) => validate(g, a),
    }
}

fn read_input(g: &GlobalArgs, input: &Path) -> Result<String, Failure> {
    if let Some(out) = &g.output {
        if same_file(out, input) {
            return Err(Failure::Usage(format!(
                "output {} would overwrite the input file",
                out.display()
            )));
        }
    }
    fs::read_to_string(input)
        .with_context(|| format!("cannot read input file {}", input.display()))
        .map_err(Failure::Data)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

fn emit(g: &GlobalArgs, text: &str) -> Result<(), Failure> {
    match &g.output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::Data),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .context("cannot write to stdout")
                .map_err(Failure::Data)
        }
    }
}

fn records(g: &GlobalArgs, input: &InputArgs) -> Result<Vec<MeasurementRecord>, Failure> {
    let text = read_input(g, &input.input)?;
    let mut recs =
        parse_measurements(&text).with_context(|| format!("in {}", input.input.display()))?;
    if let Some(p) = g.power_mw {
        for r in &mut recs {
            r.source_power_mw = p;
        }
    }
    Ok(recs)
}

fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn angle_out(unit: AngleUnit, rad: f64) -> f64 {
    round4(match unit {
        AngleUnit::Deg => rad.to_degrees(),
        AngleUnit::Rad => rad,
    })
}

fn complex_json(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn simulate(g: &GlobalArgs, a: &SimulateArgs) -> Outcome {
    let handedness = match a.handedness {
        Hand::Dextro => Handedness::Dextro,
        Hand::Levo => Handedness::Levo,
    };
    let sample = ChiralSample::new(
        a.specific_rotation,
        a.concentration_percent / 100.0,
        a.path_length_dm,
        a.wavelength_nm * 1e-9,
        handedness,
    )
    .context("invalid sample")?;
    let source = Intensity::milliwatts(
        g.power_mw
            .unwrap_or(chiroptica::polarization::DEFAULT_SOURCE_POWER_MW),
    )?;

    let theta = rotation_biot(&sample)?.to_radians();
    let alpha = match g.angle_unit {
        AngleUnit::Deg => a.analyzer.to_radians(),
        AngleUnit::Rad => a.analyzer,
    };
    let net = theta - alpha;
    let h = PolarizationState::horizontal();
    let x = propagate(&[rotator(theta)], &h);
    let emergent = propagate(&[rotator(theta), analyzer(alpha)], &h);
    let phases = chiral_phases(net);
    let pancharatnam = match pancharatnam_phase(&x, &linear_state(alpha)) {
        Ok(p) => json!({
            "magnitude": p.magnitude,
            "phase": angle_out(g.angle_unit, p.phase),
        }),
        Err(_) => Value::Null,
    };
    let unit = match g.angle_unit {
        AngleUnit::Deg => "deg",
        AngleUnit::Rad => "rad",
    };
    let report = json!({
        "sample": {
            "specific_rotation": sample.signed_specific_rotation(),
            "concentration_percent": a.concentration_percent,
            "path_length_dm": a.path_length_dm,
            "wavelength_nm": a.wavelength_nm,
            "handedness": match handedness {
                Handedness::Dextro => "dextro",
                Handedness::Levo => "levo",
            },
        },
        "angle_unit": unit,
        "medium_rotation": angle_out(g.angle_unit, theta),
        "analyzer": angle_out(g.angle_unit, alpha),
        "net_rotation": angle_out(g.angle_unit, net),
        "emergent_state": {
            "h": complex_json(emergent.components()[0]),
            "v": complex_json(emergent.components()[1]),
        },
        "source_mw": source.mw(),
        "transmitted_mw": transmitted_intensity(source, net).mw(),
        "absorbed_mw": absorbed_intensity(source, net).mw(),
        "gamma_left_rad": round4(phases.gamma_left),
        "gamma_right_rad": round4(phases.gamma_right),
        "pancharatnam": pancharatnam,
    });
    let mut text = serde_json::to_string_pretty(&report).context("cannot encode report")?;
    text.push('\n');
    emit(g, &text)?;
    Ok(0)
}

fn derive(g: &GlobalArgs, a: &InputArgs) -> Outcome {
    let recs = records(g, a)?;
    let derived = recs
        .iter()
        .map(derive_record)
        .collect::<chiroptica::Result<Vec<_>>>()?;
    emit(g, &write_derived(&derived))?;
    Ok(0)
}

fn fit(g: &GlobalArgs, a: &FitArgs) -> Outcome {
    let recs = records(g, &a.input)?;
    let mode = if a.through_origin {
        FitMode::ThroughOrigin
    } else {
        FitMode::FreeIntercept
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "sample",
        "n_points",
        "specific_rotation",
        "std_error",
        "intercept_deg",
        "r_squared",
    ])
    .context("cannot format fit table")?;
    for (sample, group) in group_by_sample(&recs, |r| r.sample_name.as_str()) {
        let result =
            fit_biot(&group, mode).with_context(|| format!("fitting sample `{sample}`"))?;
        w.write_record([
            sample,
            result.n_points.to_string(),
            result.specific_rotation_estimate.to_string(),
            result
                .slope_std_error
                .map(|s| s.to_string())
                .unwrap_or_default(),
            result.intercept.to_string(),
            result.r_squared.to_string(),
        ])
        .context("cannot format fit table")?;
    }
    let bytes = w.into_inner().context("cannot format fit table")?;
    emit(
        g,
        &String::from_utf8(bytes).context("fit table is not UTF-8")?,
    )?;
    Ok(0)
}

fn sweep(g: &GlobalArgs, a: &SweepArgs) -> Outcome {
    for (i, (name, _)) in a.samples.iter().enumerate() {
        if a.samples[..i].iter().any(|(n, _)| n == name) {
            return Err(Failure::Usage(format!("sample `{name}` is listed twice")));
        }
    }
    let mut out = Vec::new();
    for (k, (name, s)) in a.samples.iter().enumerate() {
        let sample = ChiralSample::new(
            s.abs(),
            0.0,
            a.path_length_dm,
            a.wavelength_nm * 1e-9,
            Handedness::from_sign(*s),
        )?;
        let options = SweepOptions {
            sample_name: name.clone(),
            temperature_c: a.temperature_c,
            source_power_mw: g
                .power_mw
                .unwrap_or(chiroptica::polarization::DEFAULT_SOURCE_POWER_MW),
        };
        out.extend(synth_sweep_with(
            &sample,
            &a.concentrations,
            a.noise_deg,
            a.seed.wrapping_add(k as u64),
            &options,
        )?);
    }
    emit(g, &write_measurements(&out))?;
    Ok(0)
}

fn plot(g: &GlobalArgs, a: &PlotArgs) -> Outcome {
    let recs = records(g, &a.input)?;
    let derived = recs
        .iter()
        .map(derive_record)
        .collect::<chiroptica::Result<Vec<_>>>()?;
    let kind = match a.kind {
        Kind::Absorbed => YKind::AbsorbedPower,
        Kind::GammaLeft => YKind::GammaLeft,
        Kind::GammaRight => YKind::GammaRight,
        Kind::Rotation => YKind::Rotation,
        Kind::SpecificRotation => YKind::SpecificRotation,
    };
    let series = build_series(&derived, kind)?;
    let format = match a.format {
        Format::Svg => PlotFormat::Svg,
        Format::Csv => PlotFormat::Csv,
    };
    let options = PlotOptions {
        width: a.width,
        height: a.height,
        title: a.title.clone(),
        ..PlotOptions::default()
    };
    emit(g, &emit_plot(&series, format, &options)?)?;
    Ok(0)
}

fn validate(g: &GlobalArgs, a: &InputArgs) -> Outcome {
    let text = read_input(g, &a.input)?;
    let violations = validate_measurements(&text);
    let list: Vec<Value> = violations
        .iter()
        .map(|v| json!({ "line": v.line, "code": v.code, "message": v.message }))
        .collect();
    let mut text = serde_json::to_string_pretty(&list).context("cannot encode violations")?;
    text.push('\n');
    emit(g, &text)?;
    Ok(if violations.is_empty() { 0 } else { 2 })
}
