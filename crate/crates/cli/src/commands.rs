use std::io::{self, BufWriter, Write};
use std::path::Path;

use cnat_core::bijections::{
    occupied_corners, permutation_to_udftt, removal_code, tlt_to_udcnm, udcnm_to_tlt,
    udftt_to_permutation, TreeLikeTableau, UdFtt, TLT_ENUMERATION_MAX,
};
use cnat_core::enumerate::{count_with_leaf_matrix, survey};
use cnat_core::permutation::permutations;
use cnat_core::reduce::{first_column_components, reduce_with_snapshots, replay};
use cnat_core::sequences::{
    a, binomial_transform, f_closed, f_count_oracle, f_rec, f_simple, inverse_binomial_transform,
    padded_column, ORACLE_MAX,
};
use cnat_core::verify::{run_suite, Suite};
use cnat_core::{
    determinant_sign, enumerate_cnats_with_leaf_matrix, is_unique_leaf_matrix, parse_matrix,
    validate_cnm, Cnm, CountTable, Permutation, SurveyOptions, SwapTrace,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::output::{emit, object, read_input, signed, unsigned, CliError, Report};
use crate::{Cli, Command, Direction, Metric, SuiteArg};

/// Largest size each command runs without `--force`.
const ENUMERATE_LIMIT: usize = 6;
const COUNT_LIMIT: usize = 7;
const UD_COUNT_LIMIT: usize = 9;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Validate { path } => ctx.validate(path),
        Command::LeafMatrix { path } => {
            let c = read_cnm(path)?;
            let text = c.leaf_matrix().to_text();
            ctx.emit(Report::new(
                "leaf-matrix",
                json!({ "path": path }),
                json!({ "matrix": text }),
                text,
            ))
        }
        Command::Perm { path } => {
            let p = read_cnm(path)?.associated_permutation();
            let text = format!("{p}\n{}\n", p.cycle_notation());
            let results = json!({
                "one_line": p.one_line(),
                "cycles": p.cycle_notation(),
                "sign": p.sign(),
                "irreducible": p.is_irreducible(),
            });
            ctx.emit(Report::new("perm", json!({ "path": path }), results, text))
        }
        Command::Det { path } => {
            let d = determinant_sign(&read_cnm(path)?);
            ctx.emit(Report::new(
                "det",
                json!({ "path": path }),
                json!({ "det": d }),
                format!("{d}\n"),
            ))
        }
        Command::Enumerate { n, leaf } => ctx.enumerate(*n, leaf.as_deref()),
        Command::Count { metric, n } => ctx.count(*metric, *n),
        Command::Bijection { direction, path } => ctx.bijection(*direction, path),
        Command::Fnk { n, k } => ctx.fnk(*n, *k),
        Command::A { n } => ctx.a(*n),
        Command::Transform { k, max_n, forward } => ctx.transform(*k, *max_n, *forward),
        Command::Reduce { path, snapshots } => ctx.reduce(path, *snapshots),
        Command::Replay { matrix, trace } => {
            let m =
                parse_matrix(&strip_comments(&read_input(matrix)?)).map_err(CliError::domain)?;
            let t: SwapTrace = read_input(trace)?.parse().map_err(CliError::domain)?;
            let out = replay(&m, &t).map_err(CliError::domain)?;
            let text = out.matrix().to_text();
            let results = json!({ "swaps": t.len(), "matrix": text, "upper_diagonal": out.is_upper_diagonal() });
            ctx.emit(Report::new(
                "replay",
                json!({ "matrix": matrix, "trace": trace }),
                results,
                text,
            ))
        }
        Command::Verify { suite } => ctx.verify(*suite),
    }
}

/// Drops `#` comment lines, which the CLI writes alongside its outputs.
fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect()
}

fn read_cnm(path: &Path) -> Result<Cnm, CliError> {
    let m = parse_matrix(&strip_comments(&read_input(path)?)).map_err(CliError::domain)?;
    validate_cnm(m).map_err(CliError::domain)
}

fn read_permutation(text: &str) -> Result<Permutation, CliError> {
    Permutation::parse_one_line(&strip_comments(text)).map_err(CliError::domain)
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn emit(&self, report: Report) -> Result<(), CliError> {
        emit(&report, self.cli.json, self.cli.csv.as_deref())
    }

    fn jobs(&self) -> usize {
        self.cli.jobs.unwrap_or(0)
    }

    fn feasible(&self, what: &str, n: usize, limit: usize) -> Result<(), CliError> {
        if n == 0 {
            return Err(CliError::Usage(format!("{what}: n must be at least 1")));
        }
        if n > limit {
            if !self.cli.force {
                return Err(CliError::Usage(format!(
                    "{what} at n = {n} is beyond the feasibility limit {limit}; pass --force to run it anyway"
                )));
            }
            eprintln!("cnat: warning: {what} at n = {n} may take very long");
        }
        Ok(())
    }

    fn validate(&self, path: &Path) -> Result<(), CliError> {
        let text = read_input(path)?;
        let m = parse_matrix(&strip_comments(&text)).map_err(CliError::domain)?;
        let inputs = json!({ "path": path });
        match validate_cnm(m) {
            Ok(c) => {
                let results = json!({ "valid": true, "size": c.size(), "violations": [] });
                self.emit(Report::new("validate", inputs, results, "valid\n"))
            }
            Err(e) => {
                let mut text = String::from("invalid\n");
                for v in &e.violations {
                    text.push_str(&format!("  {v}\n"));
                }
                let violations: Vec<Value> = e
                    .violations
                    .iter()
                    .map(|v| json!({ "axiom": v.axiom().code(), "message": v.to_string() }))
                    .collect();
                let results = json!({ "valid": false, "violations": violations });
                self.emit(Report::new("validate", inputs, results, text))?;
                Err(CliError::Domain(format!(
                    "{} axiom violation(s)",
                    e.violations.len()
                )))
            }
        }
    }

    fn enumerate(&self, n: Option<usize>, leaf: Option<&str>) -> Result<(), CliError> {
        let leaves: Vec<Permutation> = match (leaf, n) {
            (Some(text), _) => {
                let p = read_permutation(text)?;
                self.feasible("enumerate", p.len(), ENUMERATE_LIMIT + 1)?;
                vec![p]
            }
            (None, Some(n)) => {
                self.feasible("enumerate", n, ENUMERATE_LIMIT)?;
                permutations(n)
                    .filter(Permutation::is_irreducible)
                    .collect()
            }
            (None, None) => return Err(CliError::Usage("enumerate needs N or --leaf PERM".into())),
        };
        let inputs = json!({ "n": n, "leaf": leaf });
        if self.cli.csv.is_some() {
            return Err(CliError::Usage(
                "--csv is only supported by count, fnk and transform".into(),
            ));
        }
        let stdout_err = |source| CliError::Io {
            path: "<stdout>".into(),
            source,
        };
        if self.cli.json {
            let matrices: Vec<String> = leaves
                .iter()
                .flat_map(enumerate_cnats_with_leaf_matrix)
                .map(|c| c.matrix().to_text())
                .collect();
            let results = json!({ "count": matrices.len(), "matrices": matrices });
            return self.emit(Report::new("enumerate", inputs, results, ""));
        }
        let mut out = BufWriter::new(io::stdout().lock());
        let mut first = true;
        for p in &leaves {
            for c in enumerate_cnats_with_leaf_matrix(p) {
                if !first {
                    out.write_all(b"\n").map_err(stdout_err)?;
                }
                first = false;
                out.write_all(c.matrix().to_text().as_bytes())
                    .map_err(stdout_err)?;
            }
        }
        out.flush().map_err(stdout_err)
    }

    fn count(&self, metric: Metric, n: usize) -> Result<(), CliError> {
        let limit = if metric == Metric::UdCnm {
            UD_COUNT_LIMIT
        } else {
            COUNT_LIMIT
        };
        self.feasible(&format!("count {}", metric.name()), n, limit)?;
        let row =
            |v: &dyn std::fmt::Display| format!("n,metric,value\n{n},{},{v}\n", metric.name());
        let (values, text, csv) = match metric {
            Metric::Total => {
                let t = survey(n, SurveyOptions::counts_only().with_shards(self.jobs())).total;
                (json!({ "T": unsigned(&t) }), format!("{t}\n"), row(&t))
            }
            Metric::DetParity => {
                let t = survey(n, SurveyOptions::default().with_shards(self.jobs()));
                let d = t.det_difference();
                let values = json!({
                    "plus": unsigned(&t.det_plus),
                    "minus": unsigned(&t.det_minus),
                    "difference": signed(&d),
                });
                let text = format!("A={} B={} A-B={d}\n", t.det_plus, t.det_minus);
                let csv = format!("n,plus,minus\n{n},{},{}\n", t.det_plus, t.det_minus);
                (values, text, csv)
            }
            Metric::BTable => {
                let t = survey(n, SurveyOptions::counts_only().with_shards(self.jobs()));
                (b_table_json(&t), b_table_text(&t), t.to_csv())
            }
            Metric::UniqueLeaf => {
                // Both methods run; a disagreement is a bug worth surfacing.
                let mut unique = 0u64;
                for p in permutations(n) {
                    let rule = is_unique_leaf_matrix(&p);
                    if rule != (count_with_leaf_matrix(&p) == 1) {
                        return Err(CliError::Domain(format!(
                            "L-subset rule and counting disagree on {p}"
                        )));
                    }
                    unique += u64::from(rule);
                }
                (
                    json!({ "count": unique }),
                    format!("{unique}\n"),
                    row(&unique),
                )
            }
            Metric::UdCnm => {
                let k = count_with_leaf_matrix(&Permutation::reversal(n));
                (json!({ "count": k }), format!("{k}\n"), row(&k))
            }
        };
        let json = json!({ "command": "count", "n": n, "metric": metric.name(), "values": values });
        self.emit(Report {
            json,
            text,
            csv: Some(csv),
        })
    }

    fn bijection(&self, direction: Direction, path: &Path) -> Result<(), CliError> {
        let input = read_input(path)?;
        let inputs = json!({ "path": path });
        let report = match direction {
            Direction::PermToUdftt => {
                let p = read_permutation(&input)?;
                let t = permutation_to_udftt(&p);
                let code = removal_code(&t).map_err(CliError::domain)?;
                let mut text = t.to_string();
                for line in code.to_string().lines() {
                    text.push_str(&format!("# {line}\n"));
                }
                let results = json!({ "tree": t.to_string(), "edges": t.tree().edges(), "removal_code": code });
                Report::new("bijection perm-to-udftt", inputs, results, text)
            }
            Direction::UdfttToPerm => {
                let t: UdFtt = input.parse().map_err(CliError::domain)?;
                let code = removal_code(&t).map_err(CliError::domain)?;
                let p = udftt_to_permutation(&t).map_err(CliError::domain)?;
                let results = json!({ "permutation": p.one_line(), "removal_code": code });
                Report::new("bijection udftt-to-perm", inputs, results, format!("{p}\n"))
            }
            Direction::UdcnmToTlt => {
                let c = read_cnm(path)?;
                let t = udcnm_to_tlt(&c).map_err(CliError::domain)?;
                let corners = occupied_corners(&t);
                let mut text = t.to_string();
                text.push_str(&format!("# occupied_corners: {}", corners.len()));
                for cell in &corners {
                    text.push_str(&format!(" {cell}"));
                }
                text.push('\n');
                let cells: Vec<[usize; 2]> =
                    corners.iter().map(|c| [c.row + 1, c.col + 1]).collect();
                let results = json!({ "tableau": t.to_string(), "occupied_corners": cells });
                Report::new("bijection udcnm-to-tlt", inputs, results, text)
            }
            Direction::TltToUdcnm => {
                let t: TreeLikeTableau =
                    strip_comments(&input).parse().map_err(CliError::domain)?;
                let c = tlt_to_udcnm(&t).map_err(CliError::domain)?;
                let text = c.matrix().to_text();
                Report::new(
                    "bijection tlt-to-udcnm",
                    inputs,
                    json!({ "matrix": text }),
                    text,
                )
            }
        };
        self.emit(report)
    }

    fn fnk(&self, n: usize, k: Option<i64>) -> Result<(), CliError> {
        let ks: Vec<i64> = match k {
            Some(k) => vec![k],
            None => (0..n as i64).collect(),
        };
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("n,k,f\n");
        for k in ks {
            let rec = f_rec(n, k).map_err(CliError::domain)?;
            let simple = f_simple(n, k).map_err(CliError::domain)?;
            let closed = f_closed(n, k).map_err(CliError::domain)?;
            let count = if n <= ORACLE_MAX {
                Some(f_count_oracle(n, k).map_err(CliError::domain)?)
            } else {
                None
            };
            if rec != simple || rec != closed || count.as_ref().is_some_and(|c| c != &rec) {
                return Err(CliError::Domain(format!(
                    "f({n},{k}) disagrees: rec {rec}, simple {simple}, closed {closed}, count {count:?}"
                )));
            }
            text.push_str(&format!("{k} {rec}\n"));
            csv.push_str(&format!("{n},{k},{rec}\n"));
            rows.push(json!({
                "k": k,
                "f": signed(&rec),
                "methods": object([
                    ("rec".to_string(), signed(&rec)),
                    ("simple".to_string(), signed(&simple)),
                    ("closed".to_string(), signed(&closed)),
                    ("count".to_string(), count.as_ref().map_or(Value::Null, signed)),
                ]),
            }));
        }
        let report = Report::new(
            "fnk",
            json!({ "n": n, "k": k }),
            json!({ "rows": rows }),
            text,
        );
        self.emit(report.with_csv(csv))
    }

    fn a(&self, n: usize) -> Result<(), CliError> {
        let formula = a(n).map_err(CliError::domain)?;
        let rec = f_rec(n + 1, n as i64).map_err(CliError::domain)?;
        let closed = f_closed(n + 1, n as i64).map_err(CliError::domain)?;
        // Brute force over tableaux only where it is quick.
        let tableaux = if n <= TLT_ENUMERATION_MAX.min(6) {
            let all = cnat_core::bijections::enumerate_tlts(n).map_err(CliError::domain)?;
            Some(BigInt::from(
                all.iter()
                    .filter(|t| occupied_corners(t).is_empty())
                    .count(),
            ))
        } else {
            None
        };
        if formula != rec || formula != closed || tableaux.as_ref().is_some_and(|t| t != &formula) {
            return Err(CliError::Domain(format!(
                "a({n}) disagrees: formula {formula}, f_rec {rec}, f_closed {closed}, tableaux {tableaux:?}"
            )));
        }
        let results = json!({
            "a": signed(&formula),
            "f_rec": signed(&rec),
            "f_closed": signed(&closed),
            "tableaux": tableaux.as_ref().map_or(Value::Null, signed),
        });
        self.emit(Report::new(
            "a",
            json!({ "n": n }),
            results,
            format!("{formula}\n"),
        ))
    }

    fn transform(&self, k: u64, max_n: usize, forward: bool) -> Result<(), CliError> {
        self.feasible("transform", max_n, COUNT_LIMIT + 1)?;
        let tables: Vec<CountTable> = (1..=max_n)
            .map(|n| survey(n, SurveyOptions::counts_only().with_shards(self.jobs())))
            .collect();
        let input = padded_column(&tables, k);
        if input.len() < 2 {
            return Err(CliError::Domain(format!(
                "b(n,{k}) vanishes for every n <= {max_n}"
            )));
        }
        let output = if forward {
            binomial_transform(&input)
        } else {
            inverse_binomial_transform(&input)
        };
        let show = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let text = format!("input  {}\noutput {}\n", show(&input), show(&output));
        let mut csv = String::from("i,input,output\n");
        for (i, (x, y)) in input.iter().zip(&output).enumerate() {
            csv.push_str(&format!("{i},{x},{y}\n"));
        }
        let results = json!({
            "input": input.iter().map(signed).collect::<Vec<_>>(),
            "output": output.iter().map(signed).collect::<Vec<_>>(),
        });
        let inputs = json!({ "k": k, "max_n": max_n, "direction": if forward { "forward" } else { "inverse" } });
        self.emit(Report::new("transform", inputs, results, text).with_csv(csv))
    }

    fn reduce(&self, path: &Path, snapshots: bool) -> Result<(), CliError> {
        let c = read_cnm(path)?;
        let (trace, out) = reduce_with_snapshots(&c).map_err(CliError::domain)?;
        let shots = trace.snapshots.clone().unwrap_or_default();
        let mut text = String::new();
        for (i, step) in trace.steps.iter().enumerate() {
            text.push_str(&format!("{step}\n"));
            if snapshots {
                for line in shots[i].to_text().lines() {
                    text.push_str(&format!("#   {line}\n"));
                }
            }
        }
        text.push_str(&format!("# {} swap(s); result:\n", trace.len()));
        for line in out.matrix().to_text().lines() {
            text.push_str(&format!("# {line}\n"));
        }
        let results = json!({
            "steps": trace.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "snapshots": if snapshots { json!(shots.iter().map(|m| m.to_text()).collect::<Vec<_>>()) } else { Value::Null },
            "result": out.matrix().to_text(),
            "first_column_components": first_column_components(&c),
            "sign_in": c.associated_permutation().sign(),
            "sign_out": out.associated_permutation().sign(),
        });
        self.emit(Report::new(
            "reduce",
            json!({ "path": path }),
            results,
            text,
        ))
    }

    fn verify(&self, suite: SuiteArg) -> Result<(), CliError> {
        let suite = match suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::Full => Suite::Full,
            SuiteArg::Slow => Suite::Slow,
        };
        let checks = run_suite(suite, self.jobs());
        let failed = checks.iter().filter(|c| !c.pass).count();
        let mut text = String::new();
        for c in &checks {
            if c.pass {
                text.push_str(&format!("PASS {} = {}\n", c.id, c.expected));
            } else {
                text.push_str(&format!(
                    "FAIL {}: expected {}, got {}\n",
                    c.id, c.expected, c.actual
                ));
            }
        }
        text.push_str(&format!(
            "{}/{} checks passed ({suite} suite)\n",
            checks.len() - failed,
            checks.len()
        ));
        let results = json!({ "checks": checks.len(), "failed": failed });
        let mut report = Report::new("verify", json!({ "suite": suite }), results, text);
        report.insert("fixtures_compared", json!(checks));
        self.emit(report)?;
        if failed > 0 {
            return Err(CliError::Domain(format!(
                "{failed} fixture comparison(s) failed"
            )));
        }
        Ok(())
    }
}

fn b_table_text(t: &CountTable) -> String {
    let mut s = String::from("k b\n");
    for (k, b) in &t.by_k {
        s.push_str(&format!("{k} {b}\n"));
    }
    s.push_str(&format!("total {}\n", t.total));
    s
}

fn b_table_json(t: &CountTable) -> Value {
    let b = object(t.by_k.iter().map(|(k, b)| (k.to_string(), unsigned(b))));
    json!({ "b": b, "total": unsigned(&t.total), "leaf_matrices": unsigned(&t.leaf_matrices()) })
}
