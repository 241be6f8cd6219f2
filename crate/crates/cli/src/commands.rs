use std::fmt::Write as _;
use std::sync::Arc;

use laurent_groth::checks;
use laurent_groth::io::{
    self, from_json, k0_text, matrix_text, series_text, text_header, BimoduleJson, ComplexJson, K0Out, MatrixOut,
    OrderJson, PresentationJson, SeriesJson, SeriesOut,
};
use laurent_groth::series::format_terms;
use laurent_groth::{AlgebraTruncation, Degree, Error, K0Vector, LaurentSeries};
use serde_json::json;

use crate::{Cli, Command, Format};

const DEFAULT_SERIES_HEIGHT: u64 = 20;
const DEFAULT_VERIFY_HEIGHT: u64 = 40;

pub struct Outcome {
    pub output: String,
    pub code: u8,
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BeyondTruncation { .. } | Error::TruncationExhausted { .. } => 1,
            _ => 2,
        };
        Failure { message: e.to_string(), code }
    }
}

fn input_error(message: String) -> Failure {
    Failure { message, code: 2 }
}

fn ok(output: String) -> Result<Outcome, Failure> {
    Ok(Outcome { output, code: 0 })
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))
}

fn parse<T: for<'de> serde::Deserialize<'de>>(path: &str) -> Result<T, Failure> {
    from_json(&read(path)?).map_err(|e| input_error(format!("{path}: {e}")))
}

fn json_text<T: serde::Serialize>(v: &T) -> String {
    let mut s = io::to_json(v);
    s.push('\n');
    s
}

struct Context<'a> {
    cli: &'a Cli,
    order: Option<OrderJson>,
}

impl Context<'_> {
    fn series(&self, path: &str) -> Result<LaurentSeries, Failure> {
        Ok(parse::<SeriesJson>(path)?.build(self.order.as_ref())?)
    }

    fn algebra(&self, path: &str) -> Result<Arc<AlgebraTruncation>, Failure> {
        let p: PresentationJson = parse(path)?;
        Ok(p.expand(self.height_i64()?, self.order.as_ref())?)
    }

    fn height_i64(&self) -> Result<Option<i64>, Failure> {
        self.cli
            .height
            .map(|h| i64::try_from(h).map_err(|_| input_error(format!("height {h} is too large"))))
            .transpose()
    }

    fn series_out(&self, f: &LaurentSeries) -> Result<String, Failure> {
        let h = self.cli.height.unwrap_or(DEFAULT_SERIES_HEIGHT);
        Ok(match self.cli.format {
            Format::Text => series_text(f, h)?,
            Format::Json => json_text(&SeriesOut::of(f, h)?),
        })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.jobs == 0 {
        return Err(input_error("--jobs must be at least 1".into()));
    }
    log::debug!("running with {} job(s)", cli.jobs);
    let order = cli.order.as_deref().map(OrderJson::parse_flag).transpose()?;
    let ctx = Context { cli, order };
    match &cli.command {
        Command::SeriesMul { a, b } => {
            let f = ctx.series(a)?.mul(&ctx.series(b)?)?;
            ok(ctx.series_out(&f)?)
        }
        Command::SeriesInvert { input } => {
            let f = ctx.series(input)?.invert(cli.probe)?;
            ok(ctx.series_out(&f)?)
        }
        Command::SeriesEq { a, b, up_to, within } => series_eq(&ctx, a, b, up_to, *within),
        Command::AlgebraGdim { input } => {
            let alg = ctx.algebra(input)?;
            let f = alg.graded_dimension()?;
            let h = alg.height() as u64;
            ok(match cli.format {
                Format::Text => series_text(&f, h)?,
                Format::Json => json_text(&SeriesOut::of(&f, h)?),
            })
        }
        Command::AlgebraCartan { input } => {
            let alg = ctx.algebra(input)?;
            let c = alg.cartan_matrix()?;
            let h = alg.height() as u64;
            ok(match cli.format {
                Format::Text => format!("{}{}", text_header(alg.order(), h), matrix_text(&c, h)?),
                Format::Json => json_text(&MatrixOut::of(&c, alg.order(), h)?),
            })
        }
        Command::AlgebraSimples { input } => algebra_simples(&ctx, input),
        Command::Resolve { input, vertex, length } => resolve(&ctx, input, vertex, *length),
        Command::Euler { input } => euler(&ctx, input),
        Command::Functor { input } => {
            let b: BimoduleJson = parse(input)?;
            let b = b.build(ctx.height_i64()?, ctx.order.as_ref())?;
            let m = b.functor_matrix()?;
            let left = b.left().expect("validated bimodules have a left algebra");
            let h = left.height().min(b.right().height()) as u64;
            ok(match cli.format {
                Format::Text => format!("{}{}", text_header(left.order(), h), matrix_text(&m, h)?),
                Format::Json => json_text(&MatrixOut::of(&m, left.order(), h)?),
            })
        }
        Command::VerifyPaper { n } => verify_paper(&ctx, *n),
    }
}

fn series_eq(ctx: &Context, a: &str, b: &str, up_to: &str, within: Option<u64>) -> Result<Outcome, Failure> {
    let f = ctx.series(a)?;
    let g = ctx.series(b)?;
    let e = io::parse_degree_key(up_to, f.dim())?;
    let equal = match within {
        Some(h) => f.equal_up_to_within(&g, &e, h)?,
        None => f.equal_up_to(&g, &e)?,
    };
    let output = match ctx.cli.format {
        Format::Text => format!("{}\n", if equal { "equal" } else { "different" }),
        Format::Json => json_text(&json!({ "equal": equal, "up_to": e.to_vec() })),
    };
    Ok(Outcome { output, code: if equal { 0 } else { 1 } })
}

fn algebra_simples(ctx: &Context, input: &str) -> Result<Outcome, Failure> {
    let alg = ctx.algebra(input)?;
    let h = alg.height() as u64;
    let inv = alg.cartan_matrix()?.invert(h)?;
    let mut classes = Vec::new();
    for label in alg.presentation().vertices() {
        classes.push((label.clone(), inv.column_vector(alg.order().clone(), label)?));
    }
    let output = match ctx.cli.format {
        Format::Text => {
            let mut out = text_header(alg.order(), h);
            for (label, v) in &classes {
                let _ = writeln!(out, "## simple {label}");
                out.push_str(&k0_text(v, h)?);
            }
            out
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (label, v) in &classes {
                map.insert(label.clone(), serde_json::to_value(K0Out::of(v, h)?).expect("serializable"));
            }
            json_text(&json!({ "simples": map }))
        }
    };
    ok(output)
}

fn resolve(ctx: &Context, input: &str, vertex: &str, length: usize) -> Result<Outcome, Failure> {
    let alg = ctx.algebra(input)?;
    let s = io::simple_by_label(&alg, vertex)?;
    let res = laurent_groth::homalg::minimal_resolution(&s, length)?;
    log::info!("resolution has {} term(s), trusted through height {}", res.classes.len(), res.trusted_height);
    let h = res.trusted_height as u64;
    let alt = res.alternating_sum()?;
    let alt_h = res.alternating_height().max(0) as u64;
    let output = match ctx.cli.format {
        Format::Text => {
            let mut out = text_header(alg.order(), h);
            for (k, c) in res.classes.iter().enumerate() {
                let _ = writeln!(out, "## Q{k}");
                out.push_str(&k0_text(c, h)?);
            }
            let _ = writeln!(out, "## alternating sum through height {alt_h}");
            out.push_str(&k0_text(&alt, alt_h)?);
            out
        }
        Format::Json => {
            let classes = res.classes.iter().map(|c| K0Out::of(c, h)).collect::<Result<Vec<_>, _>>()?;
            json_text(&json!({
                "trusted_height": h,
                "complete": res.is_complete(),
                "classes": classes,
                "alternating": K0Out::of(&alt, alt_h)?,
            }))
        }
    };
    ok(output)
}

fn euler(ctx: &Context, input: &str) -> Result<Outcome, Failure> {
    let c: ComplexJson = parse(input)?;
    let x = c.build(ctx.height_i64()?, ctx.order.as_ref())?;
    let homology = x.homology()?;
    let (lo, _) = x.range();
    let order = x.components()[0].order().clone();
    let h = x.components().iter().map(|m| m.height()).min().unwrap_or(0).max(0) as u64;
    let classes: Vec<K0Vector> = homology
        .iter()
        .map(laurent_groth::homalg::composition_multiplicities)
        .collect::<Result<_, _>>()?;
    let e = x.euler_class()?;
    let output = match ctx.cli.format {
        Format::Text => {
            let mut out = text_header(&order, h);
            for (k, class) in classes.iter().enumerate() {
                let _ = writeln!(out, "## H{}", lo + k as i64);
                out.push_str(&k0_text(class, h)?);
            }
            let _ = writeln!(out, "## euler class");
            out.push_str(&k0_text(&e, h)?);
            out
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (k, class) in classes.iter().enumerate() {
                map.insert((lo + k as i64).to_string(), serde_json::to_value(K0Out::of(class, h)?).expect("serializable"));
            }
            json_text(&json!({ "homology": map, "euler": K0Out::of(&e, h)? }))
        }
    };
    ok(output)
}

fn lambda_expected(g: &Degree) -> i64 {
    match (g[0].rem_euclid(2), g[1]) {
        (0, 0) => 1,
        (0, 2) => -1,
        _ => 0,
    }
}

fn verify_paper(ctx: &Context, n: usize) -> Result<Outcome, Failure> {
    let h = ctx.cli.height.unwrap_or(DEFAULT_VERIFY_HEIGHT);
    let check = checks::reciprocal_check(n, h, ctx.cli.probe.max(h + 2))?;
    let table = checks::lambda_table(h)?;
    let lambda_ok = table.iter().all(|(g, c)| *c == laurent_groth::scalar::int(lambda_expected(g)));
    let nonzero: Vec<(Degree, laurent_groth::Scalar)> =
        table.iter().filter(|(_, c)| !num_is_zero(c)).cloned().collect();
    let code = if check.agree && lambda_ok { 0 } else { 1 };
    let q = laurent_groth::OrderSpec::lex(1);
    let output = match ctx.cli.format {
        Format::Text => {
            let mut out = text_header(&q, h);
            let _ = writeln!(out, "## inverse Cartan entry of k[x]/(x^{n}), deg x = 2");
            out.push_str(&format_terms(&check.series_route));
            let _ = writeln!(out, "## alternating resolution classes ({} steps)", check.resolution_length);
            out.push_str(&format_terms(&check.resolution_route));
            let _ = writeln!(out, "## routes agree: {}", if check.agree { "yes" } else { "NO" });
            out.push_str(&text_header(&laurent_groth::OrderSpec::lex(2), h));
            let _ = writeln!(out, "## (1 - x2^2)/(1 - x1^2), x1 = q, x2 = lambda");
            out.push_str(&format_terms(&nonzero));
            let _ = writeln!(out, "## lambda table matches: {}", if lambda_ok { "yes" } else { "NO" });
            out
        }
        Format::Json => {
            let to_terms = |terms: &[(Degree, laurent_groth::Scalar)]| io::TermTable::new(terms, h);
            json_text(&json!({
                "n": n,
                "height": h,
                "series_route": to_terms(&check.series_route),
                "resolution_route": to_terms(&check.resolution_route),
                "resolution_length": check.resolution_length,
                "agree": check.agree,
                "lambda_table": to_terms(&nonzero),
                "lambda_ok": lambda_ok,
            }))
        }
    };
    if code != 0 {
        log::warn!("verification failed");
    }
    Ok(Outcome { output, code })
}

fn num_is_zero(c: &laurent_groth::Scalar) -> bool {
    *c == laurent_groth::scalar::zero()
}
