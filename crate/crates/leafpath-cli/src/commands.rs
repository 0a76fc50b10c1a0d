//! One function per verb. Each takes a loaded input and returns a report.

use std::path::Path;

use leafpath::audit::{audit_complex, audit_cover, Check};
use leafpath::cheeger::{
    aux_spectrum, build_aux, check_aux_identity, combined_report, down_degree_formula, CheegerReport, FlavorBounds,
};
use leafpath::complex::{parse_complex, SimplicialComplex};
use leafpath::cover::{cover_from_complex, find_partition, parse_cover_spec, ComponentKind, Cover, Orientation, PathWeights};
use leafpath::eigen::symmetric_eigen;
use leafpath::exact::{fmt_rational, from_big, to_f64, Rational};
use leafpath::laplacians::{hodge, hodge_decomposition};
use leafpath::operators::{build_bundle, build_conditional, convergence_rate, min_eigenvalue_bound, Flavor};
use leafpath::surd::SurdMatrix;
use leafpath::walks::{
    expected_path_length, path_count, simulate, stationary, total_variation, transition_conditional, transition_full, View,
};
use leafpath::{Direction, Error};

use crate::output::{Cell, Report, Table};

/// Why a command stopped, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Guard(String),
    Verify(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Guard(_) => 2,
            Failure::Verify(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Guard(m) | Failure::Verify(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Precondition(_) => Failure::Input(e.to_string()),
            Error::Guard(_) => Failure::Guard(e.to_string()),
            Error::Numeric(_) => Failure::Verify(e.to_string()),
        }
    }
}

pub type Outcome = Result<(Report, i32), Failure>;

pub struct Input {
    pub name: String,
    pub complex: Option<SimplicialComplex>,
    pub cover: Cover,
    pub pw: PathWeights,
}

impl Input {
    /// `.cx` files are simplicial complexes, `.cover` files are graded signed graph specs.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        Self::from_text(&path.display().to_string(), ext, &text)
    }

    pub fn from_text(name: &str, ext: &str, text: &str) -> Result<Self, Failure> {
        let wrap = |e: Error| Failure::Input(format!("{name}: {e}"));
        let (complex, cover) = match ext {
            "cx" => {
                let c = parse_complex(text).map_err(wrap)?;
                let cover = cover_from_complex(&c);
                (Some(c), cover)
            }
            "cover" => (None, parse_cover_spec(text).map_err(wrap)?),
            _ => return Err(Failure::Input(format!("{name}: expected a .cx or .cover file"))),
        };
        let pw = cover.path_weights();
        Ok(Input { name: name.into(), complex, cover, pw })
    }

    fn complex(&self) -> Result<&SimplicialComplex, Failure> {
        self.complex.as_ref().ok_or_else(|| Failure::Input(format!("{}: this command needs a simplicial complex", self.name)))
    }

    fn strong(&self) -> Result<(), Failure> {
        if self.cover.is_strong() {
            Ok(())
        } else {
            Err(Failure::Input(format!("{}: this command needs a strongly graded input", self.name)))
        }
    }

    fn check_dim(&self, k: usize) -> Result<(), Failure> {
        if k > self.cover.max_dim() {
            return Err(Failure::Input(format!("dimension {k} exceeds the top dimension {}", self.cover.max_dim())));
        }
        Ok(())
    }

    fn names(&self, nodes: &[usize]) -> String {
        nodes.iter().map(|&u| self.cover.name(u)).collect::<Vec<_>>().join(" ")
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, Some(&self.name))
    }
}

fn dims(input: &Input, k: Option<usize>) -> Result<Vec<usize>, Failure> {
    match k {
        Some(k) => {
            input.check_dim(k)?;
            Ok(vec![k])
        }
        None => Ok((0..=input.cover.max_dim()).collect()),
    }
}

pub fn lp(input: &Input) -> Outcome {
    let mut t = Table::new("path-weights", &["node", "dim", "lp", "rp", "h", "d"]);
    for u in 0..input.cover.len() {
        t.push(vec![
            input.cover.name(u).into(),
            input.cover.dim(u).into(),
            from_big(&input.pw.lp[u]).into(),
            from_big(&input.pw.rp[u]).into(),
            input.pw.h(u).into(),
            from_big(&input.pw.d(u)).into(),
        ]);
    }
    let mut r = input.report("lp");
    r.add(t);
    Ok((r, 0))
}

fn state_name(cover: &Cover, view: View, s: usize) -> String {
    match view {
        View::Quotient => cover.name(s).to_string(),
        View::Cover => cover.cover_name(s),
    }
}

pub fn stationary_cmd(input: &Input, view: View) -> Outcome {
    let (cover, pw) = (&input.cover, &input.pw);
    let comps = cover.components(ComponentKind::Quotient, None)?;
    let mut summary = Table::new("components", &["component", "nodes", "normalizer", "paths", "mean_path_length"]);
    let mut t = Table::new("stationary", &["component", "state", "weight"]);
    for (ci, comp) in comps.members.iter().enumerate() {
        let pi = stationary(pw, comp, view);
        summary.push(vec![
            ci.into(),
            comp.len().into(),
            pi.normalizer.clone().into(),
            from_big(&path_count(cover, pw, comp)).into(),
            expected_path_length(cover, pw, comp).into(),
        ]);
        for (s, w) in pi.index.iter().zip(&pi.weights) {
            t.push(vec![ci.into(), state_name(cover, view, *s).into(), w.into()]);
        }
    }
    let mut r = input.report("stationary");
    r.add(summary);
    r.add(t);
    Ok((r, 0))
}

pub fn walk(input: &Input, k: Option<usize>, dir: Direction, view: View) -> Outcome {
    let (cover, pw) = (&input.cover, &input.pw);
    let t = match k {
        Some(k) => {
            input.strong()?;
            input.check_dim(k)?;
            transition_conditional(cover, pw, k, dir, view)?
        }
        None => transition_full(cover, pw, view),
    };
    let mut table = Table::new("transitions", &["from", "to", "probability"]);
    for (a, &s) in t.index.iter().enumerate() {
        for (b, &e) in t.index.iter().enumerate() {
            if t.p[(a, b)] != Rational::from_integer(0.into()) {
                table.push(vec![state_name(cover, view, s).into(), state_name(cover, view, e).into(), (&t.p[(a, b)]).into()]);
            }
        }
    }
    let mut summary = Table::new("summary", &["states", "stochastic"]);
    summary.push(vec![t.index.len().into(), t.is_stochastic().into()]);
    let mut r = input.report("walk");
    r.add(summary);
    r.add(table);
    Ok((r, 0))
}

pub struct SimArgs {
    pub steps: usize,
    pub seed: u64,
    pub start: Option<String>,
    pub view: View,
    pub tolerance: f64,
}

fn find_node(cover: &Cover, key: &str) -> Result<usize, Failure> {
    if let Some(u) = (0..cover.len()).find(|&u| cover.name(u) == key) {
        return Ok(u);
    }
    match key.parse::<usize>() {
        Ok(u) if u < cover.len() => Ok(u),
        _ => Err(Failure::Input(format!("unknown node {key}"))),
    }
}

pub fn walk_sim(input: &Input, a: &SimArgs) -> Outcome {
    let (cover, pw) = (&input.cover, &input.pw);
    let start = match &a.start {
        Some(s) => find_node(cover, s)?,
        None => 0,
    };
    let start_state = match a.view {
        View::Quotient => start,
        View::Cover => 2 * start,
    };
    let trace = simulate(cover, pw, a.view, start_state, a.steps, a.seed)?;
    let comps = cover.components(ComponentKind::Quotient, None)?;
    let comp = &comps.members[comps.component_of(start).expect("every node lies in a component")];
    let pi = stationary(pw, comp, a.view);
    let mut pi_full = vec![0.0; trace.empirical.len()];
    for (s, w) in pi.index.iter().zip(&pi.weights) {
        pi_full[*s] = to_f64(w);
    }
    let tv = total_variation(&trace.empirical, &pi_full);

    let mut summary =
        Table::new("summary", &["steps", "seed", "start", "final", "total_variation", "tolerance", "within_tolerance"]);
    summary.push(vec![
        a.steps.into(),
        Cell::int(a.seed),
        state_name(cover, a.view, start_state).into(),
        state_name(cover, a.view, *trace.states.last().unwrap()).into(),
        tv.into(),
        a.tolerance.into(),
        (tv < a.tolerance).into(),
    ]);
    let mut t = Table::new("visits", &["state", "empirical", "stationary"]);
    for s in 0..trace.empirical.len() {
        if trace.empirical[s] > 0.0 || pi_full[s] > 0.0 {
            t.push(vec![state_name(cover, a.view, s).into(), trace.empirical[s].into(), pi_full[s].into()]);
        }
    }
    let mut r = input.report("walk-sim");
    r.add(summary);
    r.add(t);
    Ok((r, 0))
}

fn push_values(t: &mut Table, prefix: &[Cell], values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        let mut row = prefix.to_vec();
        row.push(i.into());
        row.push((*v).into());
        t.push(row);
    }
}

pub fn spectrum(input: &Input, k: Option<usize>) -> Outcome {
    let (cover, pw) = (&input.cover, &input.pw);
    let o = Orientation::reference(cover.len());
    let mut r = input.report("spectrum");
    match k {
        None => {
            let b = build_bundle(cover, pw, &o)?;
            let mut t = Table::new("eigenvalues", &["operator", "index", "value"]);
            push_values(&mut t, &["quotient".into()], &symmetric_eigen(&b.a_quotient.to_f64())?.values);
            // The signed operator is antisymmetric: report the moduli of its imaginary eigenvalues.
            let sq = b.a_signed.transpose().mul(&b.a_signed)?;
            let moduli: Vec<f64> = symmetric_eigen(&sq.to_f64())?.values.iter().map(|x| x.max(0.0).sqrt()).collect();
            push_values(&mut t, &["signed-modulus".into()], &moduli);
            push_values(&mut t, &["cover-symmetric".into()], &symmetric_eigen(&b.a_sym.to_f64())?.values);
            r.add(t);
            let (bound, lmin, ok) = min_eigenvalue_bound(cover, pw)?;
            let mut t = Table::new("minimum-eigenvalue", &["threshold", "lambda_min", "holds"]);
            t.push(vec![(Rational::from_integer((-1).into()) + bound).into(), lmin.into(), ok.into()]);
            r.add(t);
        }
        Some(k) => {
            input.strong()?;
            input.check_dim(k)?;
            let mut t = Table::new("conditional", &["direction", "flavor", "index", "value"]);
            for dir in [Direction::Up, Direction::Down] {
                for fl in [Flavor::Quotient, Flavor::Signed, Flavor::Cover] {
                    let op = build_conditional(cover, pw, k, dir, fl, &o)?;
                    push_values(&mut t, &[dir.name().into(), fl.name().into()], &op.eigen()?.values);
                }
            }
            r.add(t);
            if k >= 1 {
                let mut rates = Table::new("convergence", &["up_component", "rate", "note"]);
                for comp in cover.components(ComponentKind::QuotientUp, Some(k - 1))?.members {
                    match convergence_rate(cover, pw, k, &comp) {
                        Ok(x) => rates.push(vec![input.names(&comp).into(), x.into(), Cell::Empty]),
                        Err(e) => rates.push(vec![input.names(&comp).into(), Cell::Empty, e.to_string().into()]),
                    }
                }
                r.add(rates);
            }
        }
    }
    Ok((r, 0))
}

/// Exact entry: a rational when possible, otherwise `±sqrt(p/q)`.
fn fmt_entry(m: &SurdMatrix, i: usize, j: usize) -> String {
    match m.entry_rational(i, j) {
        Some(q) => fmt_rational(&q),
        None => {
            let (s, q) = m.entry_squared(i, j);
            format!("{}sqrt({})", if s < 0 { "-" } else { "" }, fmt_rational(&q))
        }
    }
}

pub fn laplacian(input: &Input, k: usize, normalized: bool) -> Outcome {
    let c = input.complex()?;
    input.check_dim(k)?;
    let l = hodge(c, &input.pw, k, normalized)?;
    let faces = c.faces_of_dim(k);
    let total = l.total()?;
    let mut entries = Table::new("entries", &["part", "row", "col", "exact", "value"]);
    let mut eig = Table::new("eigenvalues", &["part", "index", "value"]);
    for (part, m) in [("up", &l.up), ("down", &l.down), ("total", &total)] {
        for i in 0..faces.len() {
            for j in 0..faces.len() {
                if m.entry_squared(i, j).0 != 0 {
                    entries.push(vec![
                        part.into(),
                        c.face_name(faces[i]).into(),
                        c.face_name(faces[j]).into(),
                        fmt_entry(m, i, j).into(),
                        m.entry_f64(i, j).into(),
                    ]);
                }
            }
        }
        push_values(&mut eig, &[part.into()], &symmetric_eigen(&m.to_f64())?.values);
    }
    let mut r = input.report("laplacian");
    r.add(entries);
    r.add(eig);
    Ok((r, 0))
}

pub fn hodge_cmd(input: &Input, normalized: bool) -> Outcome {
    let c = input.complex()?;
    let h = hodge_decomposition(c, &input.pw, normalized)?;
    let mut t = Table::new("hodge", &["k", "faces", "rank_up", "rank_down", "harmonic", "betti"]);
    for (k, d) in h.dims.iter().enumerate() {
        t.push(vec![
            k.into(),
            c.faces_of_dim(k).len().into(),
            d.rank_up.into(),
            d.rank_down.into(),
            d.harmonic.into(),
            h.betti[k].into(),
        ]);
    }
    let mut r = input.report("hodge");
    r.add(t);
    Ok((r, 0))
}

pub fn coherent(input: &Input, k: Option<usize>) -> Outcome {
    input.strong()?;
    let cover = &input.cover;
    let mut t = Table::new(
        "components",
        &["k", "direction", "component", "size", "members", "trivial", "coherent", "flipped"],
    );
    for k in dims(input, k)? {
        for (kind, dir) in [(ComponentKind::QuotientUp, Direction::Up), (ComponentKind::QuotientDown, Direction::Down)] {
            for (ci, comp) in cover.components(kind, Some(k))?.members.iter().enumerate() {
                let w = cover.detect_coherent(comp, dir);
                let flipped = w.as_ref().map_or(Cell::Empty, |o| {
                    let f: Vec<usize> = comp.iter().copied().filter(|&u| o.flips[u]).collect();
                    input.names(&f).into()
                });
                t.push(vec![
                    k.into(),
                    dir.name().into(),
                    ci.into(),
                    comp.len().into(),
                    input.names(comp).into(),
                    cover.is_trivial_component(comp, dir).into(),
                    w.is_some().into(),
                    flipped,
                ]);
            }
        }
    }
    let mut r = input.report("coherent");
    r.add(t);
    Ok((r, 0))
}

pub fn partition(input: &Input, k: usize) -> Outcome {
    let c = input.complex()?;
    input.check_dim(k)?;
    let cover = &input.cover;
    let mut t = Table::new("partitions", &["component", "members", "coherent", "partition"]);
    for (ci, comp) in cover.components(ComponentKind::QuotientDown, Some(k))?.members.iter().enumerate() {
        let parts = find_partition(c, comp).map_or(Cell::Empty, |parts| {
            let classes: Vec<String> = parts
                .iter()
                .map(|p| p.iter().map(|&v| c.labels()[v].clone()).collect::<Vec<_>>().join(" "))
                .collect();
            classes.join(" | ").into()
        });
        t.push(vec![
            ci.into(),
            input.names(comp).into(),
            cover.detect_coherent(comp, Direction::Down).is_some().into(),
            parts,
        ]);
    }
    let mut r = input.report("partition");
    r.add(t);
    Ok((r, 0))
}

fn bounds_row(input: &Input, rep: &CheegerReport, flavor: &str, f: &FlavorBounds) -> Vec<Cell> {
    vec![
        input.names(&rep.up_component).into(),
        input.names(&rep.down_component).into(),
        flavor.into(),
        (&rep.d_up).into(),
        Cell::opt_rat(rep.d_down.as_ref()),
        (&f.h_up).into(),
        Cell::opt_rat(f.h_down.as_ref()),
        (&f.lower_up).into(),
        Cell::opt_rat(f.lower_down.as_ref()),
        (&f.upper_up).into(),
        Cell::opt_rat(f.upper_down.as_ref()),
        (&f.lower).into(),
        (&f.upper).into(),
        f.gap_up.into(),
        f.gap_down.into(),
        f.sandwich_ok.into(),
    ]
}

pub fn cheeger(input: &Input, k: usize) -> Outcome {
    input.complex()?;
    input.check_dim(k)?;
    if k == 0 {
        return Err(Failure::Input("combined Cheeger bounds need k >= 1".into()));
    }
    let (cover, pw) = (&input.cover, &input.pw);
    let reports = combined_report(cover, pw, k)?;
    let mut t = Table::new(
        "combined",
        &[
            "up_component", "down_component", "flavor", "d_up", "d_down", "h_up", "h_down", "lower_up",
            "lower_down", "upper_up", "upper_down", "lower", "upper", "gap_up", "gap_down", "sandwich",
        ],
    );
    let mut rates = Table::new("rate", &["up_component", "coherent", "lower", "upper", "rate", "holds"]);
    for rep in &reports {
        t.push(bounds_row(input, rep, "quotient", &rep.quotient));
        t.push(bounds_row(input, rep, "signed", &rep.signed));
        let (lo, hi, rate, ok) = match &rep.rate {
            Some(x) => (Cell::from(&x.lower), Cell::from(&x.upper), Cell::from(x.rate), Cell::from(x.ok)),
            None => (Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty),
        };
        rates.push(vec![input.names(&rep.up_component).into(), rep.coherent.into(), lo, hi, rate, ok]);
    }

    let mut aux = Table::new(
        "auxiliary",
        &["direction", "component", "nodes", "edges", "degree_ratio", "identity_quotient", "identity_signed", "lambda_max_quotient", "lambda_max_signed"],
    );
    let mut graphs = Vec::new();
    for rep in &reports {
        graphs.push(build_aux(cover, pw, &rep.up_component, Direction::Up)?);
        if rep.down_component.len() >= 2 {
            let g = build_aux(cover, pw, &rep.down_component, Direction::Down)?;
            debug_assert_eq!(g.degree_ratio(), down_degree_formula(cover, pw, &rep.down_component));
            graphs.push(g);
        }
    }
    for g in &graphs {
        let lq = aux_spectrum(g, Flavor::Quotient)?;
        let ls = aux_spectrum(g, Flavor::Signed)?;
        aux.push(vec![
            g.direction.name().into(),
            input.names(&g.nodes).into(),
            g.len().into(),
            g.edges.len().into(),
            g.degree_ratio().into(),
            check_aux_identity(cover, pw, g, Flavor::Quotient)?.into(),
            check_aux_identity(cover, pw, g, Flavor::Signed)?.into(),
            lq.last().copied().unwrap_or(0.0).into(),
            ls.last().copied().unwrap_or(0.0).into(),
        ]);
    }
    let mut r = input.report("cheeger");
    r.add(t);
    r.add(rates);
    r.add(aux);
    Ok((r, 0))
}

/// Long-format bound tables: one row per flavor, k and side.
pub fn report(input: &Input, paper_tables: bool) -> Outcome {
    input.complex()?;
    let (cover, pw) = (&input.cover, &input.pw);
    let top = cover.max_dim();
    let ks: Vec<usize> = if paper_tables { (1..=top.min(2)).collect() } else { (1..=top).collect() };
    let mut cols = vec!["table", "k", "side", "d_down", "h", "lower_bound", "upper_bound", "spectral_gap"];
    if !paper_tables {
        cols.insert(2, "up_component");
    }
    let mut t = Table::new("bounds", &cols);
    for flavor in ["quotient", "signed"] {
        for &k in &ks {
            for rep in combined_report(cover, pw, k)? {
                let f = if flavor == "quotient" { &rep.quotient } else { &rep.signed };
                let sides = [
                    ("up", Some(&f.h_up), Some(&f.lower_up), Some(&f.upper_up), f.gap_up),
                    ("down", f.h_down.as_ref(), f.lower_down.as_ref(), f.upper_down.as_ref(), f.gap_down),
                ];
                for (side, h, lo, hi, gap) in sides {
                    let mut row = vec![
                        flavor.into(),
                        k.into(),
                        side.into(),
                        Cell::opt_rat(rep.d_down.as_ref()),
                        Cell::opt_rat(h),
                        Cell::opt_rat(lo),
                        Cell::opt_rat(hi),
                        gap.into(),
                    ];
                    if !paper_tables {
                        row.insert(2, input.names(&rep.up_component).into());
                    }
                    t.push(row);
                }
            }
        }
    }
    let mut r = input.report("report");
    r.add(t);
    Ok((r, 0))
}

fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new("checks", &["check", "passed", "detail"]);
    for c in checks {
        t.push(vec![c.name.clone().into(), c.passed.into(), c.detail.clone().into()]);
    }
    t
}

pub fn verify(input: &Input) -> Outcome {
    let checks = match &input.complex {
        Some(c) => audit_complex(c)?,
        None => audit_cover(&input.cover)?,
    };
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut summary = Table::new("summary", &["checks", "failed"]);
    summary.push(vec![checks.len().into(), failed.into()]);
    let mut r = input.report("verify");
    r.add(summary);
    r.add(checks_table(&checks));
    Ok((r, if failed == 0 { 0 } else { 3 }))
}
