//! Recorded runs: one row per instant, one column per scalar leaf of every
//! observed stream, with CSV and JSON-lines encodings and a runtime monitor
//! that replays refinement annotations over a trace.
//!
//! Column names come from the program text, not from the run:
//! - `out` is the emitted value of `main`;
//! - a `let` binder `x` is `x`, or `x#k` when `k`-th of several binders
//!   named `x` in preorder;
//! - a `robot_str "k"` write is `write.k`;
//! - tuple leaves append `.i` per level, e.g. `p.1.0`.

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, Write as IoWrite};

use crate::ast::*;
use crate::interp::{self, Ctx, Instant, Site};
use crate::temporal::{self, EvalError, Valuation, Verdict};

pub const OUTPUT: &str = "out";

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn format_err<T>(line: usize, message: impl Into<String>) -> Result<T, TraceError> {
    Err(TraceError::Format { line, message: message.into() })
}

/// Every binder of `main` with its site, in preorder.
pub fn binder_sites(main: &Expr) -> Vec<(Site, Name)> {
    fn go(e: &Expr, path: &mut Vec<u32>, out: &mut Vec<(Site, Name)>) {
        if let Expr::Let(b) | Expr::LetRec(b) = e {
            let site = Site { path: path.clone(), rec: matches!(e, Expr::LetRec(_)) };
            for n in b.pat.names() {
                out.push((site.clone(), n.to_string()));
            }
        }
        let mut child = |e: &Expr, edge: u32, out: &mut Vec<(Site, Name)>| {
            path.push(edge);
            go(e, path, out);
            path.pop();
        };
        match e {
            Expr::Const(_) | Expr::Var(_) | Expr::App(..) => {}
            Expr::Let(b) | Expr::LetRec(b) => {
                child(&b.rhs, 0, out);
                child(&b.body, 1, out);
            }
            Expr::Fby(a, b) | Expr::Binary(_, a, b) => {
                child(a, 0, out);
                child(b, 1, out);
            }
            Expr::If(_, a, b) => {
                child(a, 0, out);
                child(b, 1, out);
            }
            Expr::Delay(a) => child(a, 1, out),
            Expr::Unary(_, a) => child(a, 0, out),
            Expr::Tuple(es) => {
                for (i, e) in es.iter().enumerate() {
                    child(e, i as u32, out);
                }
            }
            Expr::Models(a, r) => {
                child(a, 0, out);
                if let Robot::Str(_, x) = &**r {
                    child(x, 1, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(main, &mut Vec::new(), &mut out);
    out
}

/// Column label of every binder of `main`, in preorder.
pub fn binder_labels(main: &Expr) -> Vec<((Site, Name), String)> {
    let sites = binder_sites(main);
    let mut count: HashMap<&str, usize> = HashMap::from([(OUTPUT, 1)]);
    for (_, n) in &sites {
        *count.entry(n).or_default() += 1;
    }
    let mut seen: HashMap<&str, usize> = HashMap::from([(OUTPUT, 1)]);
    let labels: Vec<String> = sites
        .iter()
        .map(|(_, n)| {
            if count[n.as_str()] == 1 {
                n.clone()
            } else {
                let k = seen.entry(n).or_default();
                *k += 1;
                format!("{n}#{k}")
            }
        })
        .collect();
    sites.into_iter().zip(labels).collect()
}

/// Label of the emitted value; `out#1` if a binder is also called `out`.
pub fn output_label(main: &Expr) -> String {
    if binder_sites(main).iter().any(|(_, n)| n == OUTPUT) {
        format!("{OUTPUT}#1")
    } else {
        OUTPUT.to_string()
    }
}

fn flatten(label: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Tuple(vs) => {
            for (i, v) in vs.iter().enumerate() {
                flatten(&format!("{label}.{i}"), v, out);
            }
        }
        v => out.push((label.to_string(), v.clone())),
    }
}

/// A run as a table. Row `i` is instant `i`; `None` marks a stream with no
/// value at that instant (a binder under a `fby` that has not fired yet).
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Value>>>,
}

impl Trace {
    /// Builds the table for `instants` of `program`, taken from instant 0.
    pub fn record(program: &Program, instants: &[Instant]) -> Trace {
        let labels: HashMap<(Site, Name), (usize, String)> =
            binder_labels(&program.main).into_iter().enumerate().map(|(i, (k, l))| (k, (i, l))).collect();
        let out_label = output_label(&program.main);
        // (group, index within group) orders columns: output, binders in
        // preorder, then writes by first appearance
        let mut order: BTreeMap<(usize, usize, usize), String> = BTreeMap::new();
        let mut write_keys: Vec<String> = Vec::new();
        let mut cells: Vec<HashMap<String, Value>> = Vec::with_capacity(instants.len());
        for inst in instants {
            let mut row: Vec<((usize, usize), String, Value)> = Vec::new();
            row.push(((0, 0), out_label.clone(), inst.output.clone()));
            for b in &inst.bound {
                let key = (b.site.clone(), b.name.clone());
                let (i, label) = labels.get(&key).cloned().unwrap_or_else(|| (usize::MAX, b.name.clone()));
                row.push(((1, i), label, b.value.clone()));
            }
            for w in &inst.writes {
                let i = write_keys.iter().position(|k| *k == w.key).unwrap_or_else(|| {
                    write_keys.push(w.key.clone());
                    write_keys.len() - 1
                });
                row.push(((2, i), format!("write.{}", w.key), w.value.clone()));
            }
            let mut map = HashMap::new();
            for ((g, i), label, v) in row {
                let mut leaves = Vec::new();
                flatten(&label, &v, &mut leaves);
                for (j, (col, v)) in leaves.into_iter().enumerate() {
                    order.entry((g, i, j)).or_insert_with(|| col.clone());
                    map.insert(col, v);
                }
            }
            cells.push(map);
        }
        let mut columns: Vec<String> = Vec::new();
        for c in order.into_values() {
            if !columns.contains(&c) {
                columns.push(c);
            }
        }
        let rows = cells.into_iter().map(|mut m| columns.iter().map(|c| m.remove(c)).collect()).collect();
        Trace { columns, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn get(&self, instant: usize, name: &str) -> Option<&Value> {
        self.rows.get(instant)?.get(self.column(name)?)?.as_ref()
    }

    /// The values of one column; `None` if the column does not exist.
    pub fn series(&self, name: &str) -> Option<Vec<Option<Value>>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r[c].clone()).collect())
    }

    /// Reassembles the stream `label`, either a scalar column or the tuple
    /// spread over `label.i...` columns.
    pub fn value(&self, instant: usize, label: &str) -> Option<Value> {
        let row = self.rows.get(instant)?;
        if let Some(c) = self.column(label) {
            return row[c].clone();
        }
        let prefix = format!("{label}.");
        let mut leaves: Vec<(Vec<usize>, Value)> = Vec::new();
        for (c, name) in self.columns.iter().enumerate() {
            if let Some(rest) = name.strip_prefix(&prefix) {
                let path: Option<Vec<usize>> = rest.split('.').map(|s| s.parse().ok()).collect();
                leaves.push((path?, row[c].clone()?));
            }
        }
        if leaves.is_empty() {
            return None;
        }
        assemble(&leaves)
    }

    pub fn write_csv<W: IoWrite>(&self, w: W) -> Result<(), TraceError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(std::iter::once("instant").chain(self.columns.iter().map(String::as_str)))?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(row.iter().map(|v| v.as_ref().map(csv_cell).unwrap_or_default()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Trace, TraceError> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
        let header = rd.headers()?.clone();
        if header.get(0) != Some("instant") {
            return format_err(1, "first column must be `instant`");
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.get(0).and_then(|s| s.parse::<usize>().ok()) != Some(i) {
                return format_err(line, format!("expected instant {i}"));
            }
            let row = rec.iter().skip(1).map(parse_cell).collect::<Option<Vec<_>>>();
            match row {
                Some(row) => rows.push(row),
                None => return format_err(line, "unreadable cell"),
            }
        }
        Ok(Trace { columns, rows })
    }

    pub fn write_jsonl<W: IoWrite>(&self, mut w: W) -> Result<(), TraceError> {
        for (i, row) in self.rows.iter().enumerate() {
            let mut obj = serde_json::Map::new();
            obj.insert("instant".into(), i.into());
            for (c, v) in self.columns.iter().zip(row) {
                obj.insert(c.clone(), v.as_ref().map(json_cell).unwrap_or(serde_json::Value::Null));
            }
            serde_json::to_writer(&mut w, &obj).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Trace, TraceError> {
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let n = i + 1;
            let obj: serde_json::Map<String, serde_json::Value> = match serde_json::from_str(&line) {
                Ok(o) => o,
                Err(e) => return format_err(n, e.to_string()),
            };
            if obj.get("instant").and_then(|v| v.as_u64()) != Some(rows.len() as u64) {
                return format_err(n, format!("expected instant {}", rows.len()));
            }
            let cols: Vec<String> = obj.keys().filter(|k| *k != "instant").cloned().collect();
            match &columns {
                None => columns = Some(cols.clone()),
                Some(c) if *c != cols => return format_err(n, "columns differ from the first record"),
                Some(_) => {}
            }
            let mut row = Vec::with_capacity(cols.len());
            for c in &cols {
                match from_json_cell(&obj[c]) {
                    Some(v) => row.push(v),
                    None => return format_err(n, format!("unreadable value for `{c}`")),
                }
            }
            rows.push(row);
        }
        Ok(Trace { columns: columns.unwrap_or_default(), rows })
    }
}

fn assemble(leaves: &[(Vec<usize>, Value)]) -> Option<Value> {
    if let [(p, v)] = leaves {
        if p.is_empty() {
            return Some(v.clone());
        }
    }
    let mut groups: BTreeMap<usize, Vec<(Vec<usize>, Value)>> = BTreeMap::new();
    for (p, v) in leaves {
        let (&i, rest) = p.split_first()?;
        groups.entry(i).or_default().push((rest.to_vec(), v.clone()));
    }
    // indices must be exactly 0..n
    if groups.keys().copied().ne(0..groups.len()) {
        return None;
    }
    groups.values().map(|g| assemble(g)).collect::<Option<Vec<_>>>().map(Value::Tuple)
}

/// Shortest plain or scientific rendering of `f` with 17 significant
/// digits, which round-trips every double.
pub fn format_float(f: f64) -> String {
    if !f.is_finite() {
        return if f.is_nan() { "NaN".into() } else if f > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{f:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mant) = mant.strip_prefix('-').map(|m| ("-", m)).unwrap_or(("", mant));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let trim = |s: &str| -> String {
        let t = s.trim_end_matches('0');
        if t.is_empty() {
            "0".into()
        } else {
            t.into()
        }
    };
    if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let k = exp as usize + 1;
            (digits[..k].to_string(), digits[k..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat((-exp - 1) as usize), digits))
        };
        format!("{sign}{int}.{}", trim(&frac))
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], trim(&digits[1..]))
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Float(f) => format_float(*f),
        v => v.to_string(),
    }
}

fn parse_cell(s: &str) -> Option<Option<Value>> {
    Some(Some(match s {
        "" => return Some(None),
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        s if s.bytes().all(|b| b.is_ascii_digit() || b == b'-') => Value::Int(s.parse().ok()?),
        s => Value::Float(s.parse().ok()?),
    }))
}

fn json_cell(v: &Value) -> serde_json::Value {
    match v {
        Value::Int(i) => (*i).into(),
        Value::Float(f) if f.is_finite() => (*f).into(),
        Value::Float(f) => format_float(*f).into(),
        Value::Bool(b) => (*b).into(),
        v => v.to_string().into(),
    }
}

fn from_json_cell(v: &serde_json::Value) -> Option<Option<Value>> {
    use serde_json::Value as J;
    Some(Some(match v {
        J::Null => return Some(None),
        J::Bool(b) => Value::Bool(*b),
        J::Number(n) if n.is_i64() => Value::Int(n.as_i64()?),
        J::Number(n) if n.is_f64() => Value::Float(n.as_f64()?),
        J::String(s) if matches!(s.as_str(), "NaN" | "inf" | "-inf") => Value::Float(s.parse().ok()?),
        _ => return None,
    }))
}

// ------------------------------------------------------------------ monitor

/// An annotation to check at run time.
#[derive(Debug, Clone)]
pub struct Property {
    /// `main` or the binder, e.g. `let rec (flow, level)`.
    pub label: String,
    binder: Pattern,
    pred: TracePred,
    /// Stream carrying the annotated value.
    subject: Subject,
    /// Other names visible to the predicate, mapped to column labels.
    scope: Vec<(Name, String)>,
}

#[derive(Debug, Clone)]
enum Subject {
    Stream(String),
    Pattern(Pattern, Vec<(Name, String)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyVerdict {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("monitoring `{property}` at instant {instant}: {message}")]
pub struct MonitorError {
    pub property: String,
    pub instant: usize,
    pub message: String,
}

/// Checks the annotation of `main` and of every annotated binder on the
/// top-level `let` spine. Nested binders are recorded but not monitored:
/// their annotations may read outer streams one instant late.
pub struct Monitor<'p> {
    funs: &'p [FunDef],
    pub properties: Vec<Property>,
}

impl<'p> Monitor<'p> {
    pub fn new(p: &'p Program) -> Monitor<'p> {
        let labels: HashMap<(Site, Name), String> = binder_labels(&p.main).into_iter().collect();
        let mut properties = Vec::new();
        if let Some(RefType::Refined { binder, pred, .. }) = &p.main_ty {
            properties.push(Property {
                label: "main".into(),
                binder: binder.clone(),
                pred: pred.clone(),
                subject: Subject::Stream(output_label(&p.main)),
                scope: Vec::new(),
            });
        }
        let mut scope: Vec<(Name, String)> = Vec::new();
        let mut cur = &p.main;
        let mut path = Vec::new();
        while let Expr::Let(b) | Expr::LetRec(b) = cur {
            let rec = matches!(cur, Expr::LetRec(_));
            let site = Site { path: path.clone(), rec };
            let own: Vec<(Name, String)> = b
                .pat
                .names()
                .into_iter()
                .map(|n| (n.to_string(), labels[&(site.clone(), n.to_string())].clone()))
                .collect();
            scope.extend(own.iter().cloned());
            if let Some(RefType::Refined { binder, pred, .. }) = &b.ty {
                properties.push(Property {
                    label: format!("{} {}", if rec { "let rec" } else { "let" }, b.pat),
                    binder: binder.clone(),
                    pred: pred.clone(),
                    subject: Subject::Pattern(b.pat.clone(), own),
                    scope: scope.clone(),
                });
            }
            path.push(1);
            cur = &b.body;
        }
        Monitor { funs: &p.funs, properties }
    }

    pub fn check(&self, trace: &Trace) -> Result<Vec<PropertyVerdict>, MonitorError> {
        self.properties
            .iter()
            .map(|prop| {
                let envs = (0..trace.len()).map(|i| self.env(prop, trace, i)).collect::<Result<Vec<_>, _>>()?;
                let verdict = temporal::eval_prefix(&prop.pred, &envs).map_err(|e| MonitorError {
                    property: prop.label.clone(),
                    instant: 0,
                    message: e.to_string(),
                })?;
                Ok(PropertyVerdict { label: prop.label.clone(), verdict })
            })
            .collect()
    }

    fn env(&self, prop: &Property, trace: &Trace, i: usize) -> Result<RowEnv<'p>, MonitorError> {
        let err = |message: String| MonitorError { property: prop.label.clone(), instant: i, message };
        let mut vals = HashMap::new();
        for (n, label) in &prop.scope {
            if let Some(v) = trace.value(i, label) {
                vals.insert(n.clone(), v);
            }
        }
        let subject = match &prop.subject {
            Subject::Stream(label) => trace.value(i, label),
            Subject::Pattern(pat, own) => {
                let by_name: HashMap<&str, &str> = own.iter().map(|(n, l)| (n.as_str(), l.as_str())).collect();
                rebuild(pat, &|n| trace.value(i, by_name[n]))
            }
        };
        let subject = subject.ok_or_else(|| err("annotated stream has no value".into()))?;
        let parts = prop
            .binder
            .bind_value(&subject)
            .ok_or_else(|| err(format!("value {subject} does not match `{}`", prop.binder)))?;
        for (n, v) in parts {
            vals.insert(n.to_string(), v.clone());
        }
        Ok(RowEnv { vals, funs: self.funs })
    }
}

fn rebuild(pat: &Pattern, value: &dyn Fn(&str) -> Option<Value>) -> Option<Value> {
    match pat {
        Pattern::Var(n) => value(n),
        Pattern::Tuple(ps) => ps.iter().map(|p| rebuild(p, value)).collect::<Option<Vec<_>>>().map(Value::Tuple),
    }
}

fn from_leaves(t: &BaseType, leaves: &mut std::slice::Iter<'_, Value>) -> Option<Value> {
    match t {
        BaseType::Product(ts) => ts.iter().map(|t| from_leaves(t, leaves)).collect::<Option<Vec<_>>>().map(Value::Tuple),
        _ => leaves.next().cloned(),
    }
}

/// One instant's valuation; functions run on the interpreter.
struct RowEnv<'p> {
    vals: HashMap<String, Value>,
    funs: &'p [FunDef],
}

impl Valuation for RowEnv<'_> {
    fn lookup(&self, name: &str) -> Option<Value> {
        self.vals.get(name).cloned()
    }

    fn apply(&self, f: &str, args: &[Value]) -> Result<Value, EvalError> {
        let d = self.funs.iter().find(|d| d.name == f).ok_or_else(|| EvalError::NoFunction(f.into()))?;
        let arg = from_leaves(d.arg.base(), &mut args.iter())
            .ok_or_else(|| EvalError::Type(format!("wrong number of arguments to `{f}`")))?;
        let mut ctx = Ctx::new(self.funs);
        match interp::apply(&mut ctx, f, &arg) {
            Ok(v) if !matches!(v, Value::Tuple(_) | Value::Nil) => Ok(v),
            Ok(v) => Err(EvalError::Type(format!("`{f}` returned non-scalar {v}"))),
            Err(e) => Err(EvalError::Type(e.to_string())),
        }
    }
}

/// Runs `program` for `steps` instants and records the trace. On a runtime
/// error the instants completed so far are returned with it.
pub fn run(
    program: &Program,
    steps: usize,
    devices: Option<&crate::devices::DeviceTable>,
) -> Result<Trace, (Trace, usize, interp::RuntimeError)> {
    let mut m = interp::Machine::new(program);
    m.devices = devices;
    let mut instants = Vec::with_capacity(steps);
    for i in 0..steps {
        match m.step() {
            Ok(inst) => instants.push(inst),
            Err(e) => return Err((Trace::record(program, &instants), i, e)),
        }
    }
    Ok(Trace::record(program, &instants))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    fn ints(t: &Trace, col: &str) -> Vec<i64> {
        t.series(col)
            .unwrap()
            .into_iter()
            .map(|v| match v {
                Some(Value::Int(i)) => i,
                v => panic!("{v:?}"),
            })
            .collect()
    }

    #[test]
    fn nested_delay_columns() {
        let p = parse_program("let rec x = (let y = 0 fby 1 in (0 fby x + y)) in x").unwrap();
        let t = run(&p, 6, None).unwrap();
        assert_eq!(t.columns, vec!["out", "x", "y"]);
        assert_eq!(ints(&t, "x"), vec![0, 0, 1, 2, 3, 4]);
        assert_eq!(ints(&t, "y"), vec![0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn late_binder_is_blank_until_it_fires() {
        let p = parse_program("let rec x = 0 fby (let z = x + 10 in z) in x").unwrap();
        let t = run(&p, 3, None).unwrap();
        assert_eq!(t.series("z").unwrap(), vec![None, Some(Value::Int(10)), Some(Value::Int(20))]);
    }

    #[test]
    fn shadowed_and_tuple_columns() {
        let p = parse_program("let x = 1 in let x = (x, 2.5) in let rec (a, b) = (0, 1) fby (b, a) in a").unwrap();
        let t = run(&p, 2, None).unwrap();
        assert_eq!(t.columns, vec!["out", "x#1", "x#2.0", "x#2.1", "a", "b"]);
        assert_eq!(t.value(1, "x#2"), Some(Value::Tuple(vec![Value::Int(1), Value::Float(2.5)])));
    }

    #[test]
    fn float_format_round_trips() {
        for f in [0.0, -0.0, 0.1, 15.0, 14.99, -1.5e-7, 1e300, 123456789.123, f64::MIN_POSITIVE, f64::MAX] {
            let s = format_float(f);
            assert!(s.contains('.'), "{s}");
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), f.to_bits(), "{s}");
        }
        assert_eq!(format_float(15.0), "15.0");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(-2.5e-7), "-2.4999999999999999e-7");
        assert_eq!(format_float(0.5f64.powi(30)), "9.3132257461547852e-10");
    }

    #[test]
    fn csv_and_jsonl_round_trip() {
        let p = parse_program("let rec (a, b) = (0, 0.1) fby (a + 1, b * 3.0) in let c = a > 1 in (a, c)").unwrap();
        let t = run(&p, 5, None).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("instant,out.0,out.1,a,b,c\n0,0,false,0,0.10000000000000001,false\n"), "{text}");
        assert_eq!(Trace::read_csv(&buf[..]).unwrap(), t);
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        assert_eq!(Trace::read_jsonl(&buf[..]).unwrap(), t);
    }

    #[test]
    fn readers_reject_bad_input() {
        assert!(Trace::read_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(Trace::read_csv("instant,x\n1,2\n".as_bytes()).is_err());
        assert!(Trace::read_csv("instant,x\n0,abc\n".as_bytes()).is_err());
        assert!(Trace::read_jsonl("{\"instant\":0,\"x\":1}\n{\"instant\":1,\"y\":1}\n".as_bytes()).is_err());
        assert!(Trace::read_jsonl("{\"instant\":1}\n".as_bytes()).is_err());
        assert!(Trace::read_jsonl("[1]\n".as_bytes()).is_err());
    }

    #[test]
    fn monitor_counter() {
        let p = parse_program("let rec x : {v : int | always (v >= 0)} = 0 fby x + 1 in x").unwrap();
        let t = run(&p, 10, None).unwrap();
        let vs = Monitor::new(&p).check(&t).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].verdict, Verdict::Inconclusive);

        let p = parse_program("let rec x : {v : int | always (v >= 0)} = 2 fby x - 1 in x").unwrap();
        let t = run(&p, 10, None).unwrap();
        let vs = Monitor::new(&p).check(&t).unwrap();
        assert!(matches!(vs[0].verdict, Verdict::Violation { instant: 3, .. }));
    }

    #[test]
    fn monitor_sees_earlier_binders_and_functions() {
        let p = parse_program(
            "let double (x : int) : int = x + x;; \
             main : {v : int | v = 3} = \
             let k = 3 in let rec (a, b) : {(p, q) : int * int | always (q = double (p) + k)} = (0, 3) fby (a + 1, double (a + 1) + k) in k",
        )
        .unwrap();
        let t = run(&p, 5, None).unwrap();
        let vs = Monitor::new(&p).check(&t).unwrap();
        let labels: Vec<_> = vs.iter().map(|v| (v.label.as_str(), v.verdict.kind())).collect();
        assert_eq!(labels, vec![("main", "pass"), ("let rec (a, b)", "inconclusive")]);
    }
}
