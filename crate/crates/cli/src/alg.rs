//! The `.alg` session file: quiver, relations, field, named subcategories and run settings.
//!
//! Vertices are numbered from 1. A path `b*a` means "a, then b".

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use dexact::algebra::{Arrow, BoundAlgebra, Quiver, Relation, DEFAULT_PATH_BOUND};
use dexact::exactla::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// How a subcategory picks catalog objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Dims(Vec<usize>),
    Projectives,
    Injectives,
    All,
}

#[derive(Debug, Clone)]
pub struct SubcatSpec {
    pub name: String,
    pub selectors: Vec<(Selector, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AmbientSpec {
    Module,
    ClusterTilting(String),
    Torsion { u: String, t: String },
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub d: usize,
    pub ambient: AmbientSpec,
    /// Default subcategory for `index` and `thm11`.
    pub t: Option<String>,
    /// Default subcategory for `theorem-a`, `prop13` and `gen`.
    pub x: Option<String>,
    pub path_bound: usize,
    pub dim_cap: usize,
    pub max_multiplicity: usize,
    pub max_types: usize,
    pub random_combos: usize,
    pub coeff_bound: i64,
    pub pairs: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            d: 1,
            ambient: AmbientSpec::Module,
            t: None,
            x: None,
            path_bound: DEFAULT_PATH_BOUND,
            dim_cap: 30,
            max_multiplicity: 2,
            max_types: 2,
            random_combos: 2,
            coeff_bound: 3,
            pairs: 40,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgFile {
    pub field: Field,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
    pub subcats: Vec<SubcatSpec>,
    pub settings: Settings,
}

impl AlgFile {
    pub fn build(&self) -> dexact::Result<Arc<BoundAlgebra>> {
        BoundAlgebra::build_with_bound(self.quiver.clone(), self.relations.clone(), self.field, self.settings.path_bound)
    }

    pub fn subcat(&self, name: &str) -> Option<&SubcatSpec> {
        self.subcats.iter().find(|s| s.name == name)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Quiver,
    Relations,
    Field,
    Subcat,
    Config,
}

/// A line with its number and the column where its content starts.
struct Line<'a> {
    no: usize,
    start: usize,
    text: &'a str,
}

fn strip(no: usize, raw: &str) -> Option<Line<'_>> {
    let code = raw.split('#').next().unwrap_or("");
    let trimmed = code.trim_start();
    let start = code.len() - trimmed.len() + 1;
    let text = trimmed.trim_end();
    (!text.is_empty()).then_some(Line { no, start, text })
}

pub fn parse(src: &str) -> Result<AlgFile, ParseError> {
    let mut section = Section::None;
    let mut vertices: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut arrow_lines: Vec<usize> = Vec::new();
    let mut relation_lines: Vec<Line> = Vec::new();
    let mut field: Option<Field> = None;
    let mut subcats: Vec<SubcatSpec> = Vec::new();
    let mut settings = Settings::default();
    let mut seen = BTreeMap::new();

    for (i, raw) in src.lines().enumerate() {
        let Some(line) = strip(i + 1, raw) else { continue };
        let (no, col) = (line.no, line.start);
        if let Some(rest) = line.text.strip_prefix('[') {
            let Some(head) = rest.strip_suffix(']') else {
                return err(no, col + line.text.len(), "expected `]`");
            };
            let mut words = head.split_whitespace();
            let kind = words.next().unwrap_or("");
            let name = words.next();
            if words.next().is_some() {
                return err(no, col, "too many words in section header");
            }
            section = match (kind, name) {
                ("quiver", None) => Section::Quiver,
                ("relations", None) => Section::Relations,
                ("field", None) => Section::Field,
                ("config", None) => Section::Config,
                ("subcat", Some(n)) => {
                    if subcats.iter().any(|s| s.name == n) || matches!(n, "proj" | "inj" | "all") {
                        return err(no, col, format!("subcategory name `{n}` is already taken"));
                    }
                    subcats.push(SubcatSpec { name: n.to_string(), selectors: Vec::new() });
                    Section::Subcat
                }
                ("subcat", None) => return err(no, col, "`[subcat NAME]` needs a name"),
                _ => return err(no, col + 1, format!("unknown section `{head}`")),
            };
            if section != Section::Subcat && seen.insert(kind.to_string(), no).is_some() {
                return err(no, col, format!("section `[{kind}]` appears twice"));
            }
            continue;
        }
        match section {
            Section::None => return err(no, col, "content before the first section"),
            Section::Quiver => {
                parse_quiver_line(&line, &mut vertices, &mut arrows)?;
                arrow_lines.resize(arrows.len(), no);
            }
            Section::Relations => relation_lines.push(line),
            Section::Field => {
                if field.is_some() {
                    return err(no, col, "field given twice");
                }
                field = Some(parse_field(&line)?);
            }
            Section::Subcat => {
                let s = subcats.last_mut().expect("inside a subcat section");
                s.selectors.push((parse_selector(&line)?, no));
            }
            Section::Config => parse_config_line(&line, &mut settings)?,
        }
    }

    let Some(n) = vertices else {
        return err(1, 1, "missing `vertices N` in [quiver]");
    };
    for (a, &no) in arrows.iter().zip(&arrow_lines) {
        if a.source >= n || a.target >= n {
            return err(no, 1, format!("arrow {} has an endpoint outside 1..{n}", a.name));
        }
    }
    for (i, a) in arrows.iter().enumerate() {
        if arrows[..i].iter().any(|b| b.name == a.name) {
            return err(arrow_lines[i], 1, format!("duplicate arrow name {}", a.name));
        }
    }
    let quiver = Quiver::new(n, arrows).map_err(|e| ParseError { line: 1, col: 1, msg: e.to_string() })?;
    let field = field.unwrap_or(Field::Rational);
    let relations = relation_lines
        .iter()
        .map(|l| parse_relation(l, &quiver, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgFile { field, quiver, relations, subcats, settings })
}

fn parse_usize(s: &str, no: usize, col: usize, what: &str) -> Result<usize, ParseError> {
    s.parse().or_else(|_| err(no, col, format!("expected {what}, found `{s}`")))
}

/// Column of `needle` inside the line, counting from 1.
fn col_of(line: &Line, needle: &str) -> usize {
    line.start + line.text.find(needle).unwrap_or(0)
}

fn parse_quiver_line(line: &Line, vertices: &mut Option<usize>, arrows: &mut Vec<Arrow>) -> Result<(), ParseError> {
    let no = line.no;
    if let Some(rest) = line.text.strip_prefix("vertices") {
        let n = parse_usize(rest.trim(), no, col_of(line, rest.trim()), "a vertex count")?;
        if n == 0 {
            return err(no, col_of(line, rest.trim()), "a quiver needs at least one vertex");
        }
        *vertices = Some(n);
        return Ok(());
    }
    let Some(rest) = line.text.strip_prefix("arrow") else {
        return err(no, line.start, "expected `vertices N` or `arrow name: i -> j`");
    };
    let Some((name, ends)) = rest.split_once(':') else {
        return err(no, line.start + line.text.len(), "expected `:` after the arrow name");
    };
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
        return err(no, col_of(line, rest), format!("bad arrow name `{name}`"));
    }
    let Some((s, t)) = ends.split_once("->") else {
        return err(no, col_of(line, ends), "expected `i -> j`");
    };
    let vertex = |v: &str| -> Result<usize, ParseError> {
        let c = col_of(line, v);
        match parse_usize(v, no, c, "a vertex number")? {
            0 => err(no, c, "vertices are numbered from 1"),
            k => Ok(k - 1),
        }
    };
    arrows.push(Arrow {
        name: name.to_string(),
        source: vertex(s.trim())?,
        target: vertex(t.trim())?,
    });
    Ok(())
}

fn parse_field(line: &Line) -> Result<Field, ParseError> {
    let mut words = line.text.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("rational"), None, None) => Ok(Field::Rational),
        (Some("prime"), Some(p), None) => {
            let c = col_of(line, p);
            let p: u64 = p.parse().or_else(|_| err(line.no, c, format!("bad prime `{p}`")))?;
            Field::prime(p).or_else(|e| err(line.no, c, e.to_string()))
        }
        _ => err(line.no, line.start, "expected `rational` or `prime P`"),
    }
}

fn parse_dimvec(s: &str, no: usize, col: usize) -> Result<Vec<usize>, ParseError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|x| parse_usize(x.trim(), no, col, "a dimension vector like (0,1,1)"))
        .collect()
}

/// Parses `(0,1,1)` or `0,1,1`; errors carry column 1.
pub fn parse_dimvec_arg(s: &str) -> Result<Vec<usize>, ParseError> {
    parse_dimvec(s, 1, 1)
}

fn parse_selector(line: &Line) -> Result<Selector, ParseError> {
    match line.text {
        "proj" => return Ok(Selector::Projectives),
        "inj" => return Ok(Selector::Injectives),
        "all" => return Ok(Selector::All),
        _ => {}
    }
    let Some(rest) = line.text.strip_prefix("dim") else {
        return err(line.no, line.start, "expected `dim (d1,...,dn)`, `proj`, `inj` or `all`");
    };
    let c = col_of(line, rest.trim());
    if !rest.trim().starts_with('(') || !rest.trim().ends_with(')') {
        return err(line.no, c, "dimension vector must be parenthesised");
    }
    Ok(Selector::Dims(parse_dimvec(rest, line.no, c)?))
}

fn parse_config_line(line: &Line, s: &mut Settings) -> Result<(), ParseError> {
    let no = line.no;
    let Some((key, value)) = line.text.split_once('=') else {
        return err(no, line.start, "expected `key = value`");
    };
    let (key, value) = (key.trim(), value.trim());
    let vc = col_of(line, value);
    let num = |what: &str| parse_usize(value, no, vc, what);
    match key {
        "d" => {
            s.d = num("a positive integer")?;
            if s.d == 0 {
                return err(no, vc, "d must be at least 1");
            }
        }
        "ambient" => {
            let words: Vec<&str> = value.split_whitespace().collect();
            s.ambient = match words.as_slice() {
                ["mod"] => AmbientSpec::Module,
                ["cluster-tilting", t] => AmbientSpec::ClusterTilting(t.to_string()),
                ["torsion", u, t] => AmbientSpec::Torsion { u: u.to_string(), t: t.to_string() },
                _ => return err(no, vc, "expected `mod`, `cluster-tilting T` or `torsion U T`"),
            };
        }
        "t" => s.t = Some(value.to_string()),
        "x" => s.x = Some(value.to_string()),
        "path_bound" => s.path_bound = num("a path length")?,
        "dim_cap" => s.dim_cap = num("a dimension")?,
        "max_multiplicity" => s.max_multiplicity = num("a multiplicity")?,
        "max_types" => s.max_types = num("a count")?,
        "random_combos" => s.random_combos = num("a count")?,
        "coeff_bound" => s.coeff_bound = num("a coefficient bound")? as i64,
        "pairs" => s.pairs = num("a count")?,
        _ => return err(no, line.start, format!("unknown key `{key}`")),
    }
    Ok(())
}

/// `coeff*path ± coeff*path ... = 0`, with coefficients optional and `b*a` meaning a then b.
fn parse_relation(line: &Line, q: &Quiver, field: Field) -> Result<Relation, ParseError> {
    let no = line.no;
    let Some((lhs, rhs)) = line.text.split_once('=') else {
        return err(no, line.start + line.text.len(), "expected `= 0`");
    };
    if rhs.trim() != "0" {
        return err(no, col_of(line, rhs), "right-hand side must be 0");
    }
    let chars: Vec<(usize, char)> = lhs.char_indices().collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let col = |pos: usize| line.start + chars.get(pos).map_or(lhs.len(), |c| c.0);
    loop {
        skip_ws(&mut pos);
        let mut negative = false;
        if pos < chars.len() && matches!(chars[pos].1, '+' | '-') {
            negative = chars[pos].1 == '-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !terms.is_empty() {
            return err(no, col(pos), "expected `+` or `-` between terms");
        }
        if pos >= chars.len() {
            return err(no, col(pos), "expected a term");
        }
        let mut coeff = field.one();
        // optional numeric coefficient followed by `*`
        if chars[pos].1.is_ascii_digit() {
            let start = pos;
            while pos < chars.len() && (chars[pos].1.is_ascii_digit() || chars[pos].1 == '/') {
                pos += 1;
            }
            let text: String = chars[start..pos].iter().map(|c| c.1).collect();
            coeff = parse_coeff(&text, field).ok_or_else(|| ParseError { line: no, col: col(start), msg: format!("bad coefficient `{text}`") })?;
            skip_ws(&mut pos);
            if pos >= chars.len() || chars[pos].1 != '*' {
                return err(no, col(pos), "expected `*` after the coefficient");
            }
            pos += 1;
        }
        // path: names joined by `*`, leftmost traversed last
        let mut names = Vec::new();
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < chars.len() && (chars[pos].1.is_alphanumeric() || chars[pos].1 == '_') {
                pos += 1;
            }
            if start == pos {
                return err(no, col(pos), "expected an arrow name");
            }
            let name: String = chars[start..pos].iter().map(|c| c.1).collect();
            let Some(a) = q.arrow_index(&name) else {
                return err(no, col(start), format!("unknown arrow `{name}`"));
            };
            names.push((a, start));
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos].1 == '*' {
                pos += 1;
            } else {
                break;
            }
        }
        names.reverse();
        for w in names.windows(2) {
            let (a, b) = (&q.arrows()[w[0].0], &q.arrows()[w[1].0]);
            if a.target != b.source {
                return err(no, col(w[1].1), format!("{} does not start where {} ends", b.name, a.name));
            }
        }
        if negative {
            coeff = -&coeff;
        }
        terms.push((coeff, names.into_iter().map(|n| n.0).collect::<Vec<_>>()));
        skip_ws(&mut pos);
        if pos >= chars.len() {
            break;
        }
    }
    Ok(Relation { terms })
}

fn parse_coeff(text: &str, field: Field) -> Option<Scalar> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    field.from_ratio(&n, &d).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const AUS: &str = "\
# Auslander algebra of kA2
[quiver]
vertices 3
arrow a: 1 -> 2
arrow b: 2 -> 3
[relations]
b*a = 0
[field]
rational
[subcat T]
dim (1,1,0)
proj
[config]
d = 2
ambient = cluster-tilting T
";

    #[test]
    fn parses_the_auslander_algebra() {
        let f = parse(AUS).unwrap();
        assert_eq!(f.quiver.n_vertices(), 3);
        // b*a: traverse a first
        assert_eq!(f.relations[0].terms[0].1, vec![0, 1]);
        assert_eq!(f.settings.d, 2);
        assert_eq!(f.settings.ambient, AmbientSpec::ClusterTilting("T".into()));
        assert_eq!(f.subcat("T").unwrap().selectors[0].0, Selector::Dims(vec![1, 1, 0]));
        assert_eq!(f.build().unwrap().dim(), 5);
    }

    #[test]
    fn coefficients_and_signs() {
        let src = "[quiver]\nvertices 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 1 -> 2\narrow e: 2 -> 3\n[relations]\nb*a - 3/2*e*c + e*a = 0\n[field]\nprime 5\n";
        let f = parse(src).unwrap();
        let r = &f.relations[0];
        assert_eq!(r.terms.len(), 3);
        let p = Field::prime(5).unwrap();
        // -3/2 = -3 * 3 = 1 mod 5
        assert_eq!(r.terms[1].0, p.from_i64(1));
        assert_eq!(r.terms[1].1, vec![2, 3]);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("[quiver]\nvertices 2\narrow a: 1 -> 2\n[relations]\n  a*q = 0\n").unwrap_err();
        assert_eq!((e.line, e.col, e.msg.as_str()), (5, 5, "unknown arrow `q`"));
        let e = parse("[quiver]\nvertices two\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 10));
        let e = parse("[quiver]\nvertices 2\narrow a: 1 -> 2\n[relations]\na*a = 0\n").unwrap_err();
        assert_eq!(e.line, 5);
        assert!(e.msg.contains("does not start"));
        let e = parse("[quiver]\nvertices 2\n[colors]\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 2));
        let e = parse("vertices 2\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
