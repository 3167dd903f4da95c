//! The JSON spec-file format.
//!
//! Every file has a `name`, a `field` (`"rational"` or `{"prime": p}`), a
//! `kind` and a `payload`. Scalars are integers or strings `"n"` / `"p/q"`.
//! Structure constants are listed sparsely; nothing is inferred.
//!
//! | kind               | payload fields                                             |
//! |--------------------|------------------------------------------------------------|
//! | `algebra`          | `dim`, `labels`?, `unit`, `products` `[i, j, k, c]`: `e_i e_j ∋ c e_k` |
//! | `weak-hopf`        | `algebra`, `coproduct` `[i, j, k, c]`: `Δ(e_i) ∋ c e_j⊗e_k`, `counit`, `antipode` `[i, j, c]`: `S(e_i) ∋ c e_j` |
//! | `groupoid`         | `objects`, `morphisms` `{name, source, target}`, `identities`, `composition` `[g, h, g∘h]`, `inverses` `[g, g⁻¹]` |
//! | `markov-extension` | `small`, `big` (algebra payloads), `embedding` (image of each basis element of `small`), `expectation` (rows of `E`), `trace` (on `small`) |

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;
use weakhopf::algebra::{Algebra, CondExpectation, Inclusion, MarkovExtension};
use weakhopf::exactla::Mat;
use weakhopf::groupoid::{Groupoid, Morphism};
use weakhopf::whopf::WeakHopf;
use weakhopf::Field;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{context}: {msg}")]
    Invalid { context: String, msg: String },
}

fn invalid(context: impl Into<String>, msg: impl Into<String>) -> SpecError {
    SpecError::Invalid { context: context.into(), msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    fn to_value(self) -> Value {
        match self {
            FieldSpec::Rational => Value::from("rational"),
            FieldSpec::Prime(p) => serde_json::json!({ "prime": p }),
        }
    }

    fn from_value(v: &Value) -> Result<Self, SpecError> {
        match v {
            Value::String(s) if s == "rational" => Ok(FieldSpec::Rational),
            Value::Object(m) if m.len() == 1 => match m.get("prime").and_then(Value::as_u64) {
                Some(p) => Ok(FieldSpec::Prime(p)),
                None => Err(invalid("field", "expected {\"prime\": p}")),
            },
            _ => Err(invalid("field", "expected \"rational\" or {\"prime\": p}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Algebra,
    WeakHopf,
    Groupoid,
    MarkovExtension,
}

/// An integer or a string `"n"` / `"p/q"`, parsed only once the field is
/// known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn of<F: Field>(x: &F) -> Self {
        Scalar::Text(x.to_string())
    }

    fn parse<F: Field>(&self, context: &str) -> Result<F, SpecError> {
        match self {
            Scalar::Int(n) => Ok(F::from_i64(*n)),
            Scalar::Text(s) => F::parse_exact(s).ok_or_else(|| invalid(context, format!("{s:?} is not an exact scalar in this field"))),
        }
    }
}

fn scalars<F: Field>(xs: &[Scalar], context: &str) -> Result<Vec<F>, SpecError> {
    xs.iter().enumerate().map(|(i, x)| x.parse(&format!("{context}[{i}]"))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub unit: Vec<Scalar>,
    pub products: Vec<(usize, usize, usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakHopfSpec {
    pub algebra: AlgebraSpec,
    pub coproduct: Vec<(usize, usize, usize, Scalar)>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<(usize, usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidSpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    /// The identity morphism of each object, in object order.
    pub identities: Vec<String>,
    pub composition: Vec<(String, String, String)>,
    pub inverses: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovSpec {
    pub small: AlgebraSpec,
    pub big: AlgebraSpec,
    pub embedding: Vec<Vec<Scalar>>,
    pub expectation: Vec<Vec<Scalar>>,
    pub trace: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Algebra(AlgebraSpec),
    WeakHopf(WeakHopfSpec),
    Groupoid(GroupoidSpec),
    MarkovExtension(MarkovSpec),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Algebra(_) => Kind::Algebra,
            Payload::WeakHopf(_) => Kind::WeakHopf,
            Payload::Groupoid(_) => Kind::Groupoid,
            Payload::MarkovExtension(_) => Kind::MarkovExtension,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub name: String,
    pub field: FieldSpec,
    pub payload: Payload,
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, context: &str) -> Result<T, SpecError> {
    serde_json::from_value(v).map_err(|e| invalid(context, e.to_string()))
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let v: Value = serde_json::from_str(text).map_err(|e| SpecError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() })?;
        let Value::Object(mut top) = v else {
            return Err(invalid("top level", "expected an object"));
        };
        for key in top.keys() {
            if !matches!(key.as_str(), "name" | "field" | "kind" | "payload") {
                return Err(invalid("top level", format!("unknown key {key:?}")));
            }
        }
        let mut take = |k: &str| top.remove(k).ok_or_else(|| invalid("top level", format!("missing key {k:?}")));
        let name: String = typed(take("name")?, "name")?;
        let field = FieldSpec::from_value(&take("field")?)?;
        let kind: Kind = typed(take("kind")?, "kind")?;
        let p = take("payload")?;
        let payload = match kind {
            Kind::Algebra => Payload::Algebra(typed(p, "payload")?),
            Kind::WeakHopf => Payload::WeakHopf(typed(p, "payload")?),
            Kind::Groupoid => Payload::Groupoid(typed(p, "payload")?),
            Kind::MarkovExtension => Payload::MarkovExtension(typed(p, "payload")?),
        };
        Ok(SpecFile { name, field, payload })
    }

    pub fn to_json(&self) -> String {
        let payload = match &self.payload {
            Payload::Algebra(s) => serde_json::to_value(s),
            Payload::WeakHopf(s) => serde_json::to_value(s),
            Payload::Groupoid(s) => serde_json::to_value(s),
            Payload::MarkovExtension(s) => serde_json::to_value(s),
        }
        .expect("spec payloads serialize");
        let v = serde_json::json!({
            "name": self.name,
            "field": self.field.to_value(),
            "kind": self.payload.kind(),
            "payload": payload,
        });
        let mut s = String::new();
        write_value(&mut s, &v, 0);
        s.push('\n');
        s
    }
}

/// Pretty-prints like `serde_json` but keeps arrays of scalars on one line,
/// so structure-constant entries read as `[i, j, k, "c"]`.
fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 1), Value::from(k.as_str())));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}}}", pad(indent)));
        }
        Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", pad(indent)));
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
        }
        x => out.push_str(&x.to_string()),
    }
}

fn check_index(i: usize, d: usize, context: &str) -> Result<(), SpecError> {
    if i < d {
        Ok(())
    } else {
        Err(invalid(context, format!("index {i} out of range for dimension {d}")))
    }
}

fn vector<F: Field>(xs: &[Scalar], d: usize, context: &str) -> Result<Vec<F>, SpecError> {
    if xs.len() != d {
        return Err(invalid(context, format!("expected {d} entries, found {}", xs.len())));
    }
    scalars(xs, context)
}

impl AlgebraSpec {
    pub fn of<F: Field>(a: &Algebra<F>) -> Self {
        AlgebraSpec {
            dim: a.dim(),
            labels: Some(a.labels().to_vec()),
            unit: a.unit_ref().iter().map(Scalar::of).collect(),
            products: a.entries().iter().map(|(i, j, k, c)| (*i, *j, *k, Scalar::of(c))).collect(),
        }
    }

    /// Structural problems are input errors; a table that is not
    /// associative or has the wrong unit comes back as the inner `Err`.
    pub fn build<F: Field>(&self, context: &str) -> Result<Result<Algebra<F>, String>, SpecError> {
        let d = self.dim;
        let unit = vector(&self.unit, d, &format!("{context}.unit"))?;
        let mut entries = Vec::with_capacity(self.products.len());
        for (n, (i, j, k, c)) in self.products.iter().enumerate() {
            let ctx = format!("{context}.products[{n}]");
            for x in [i, j, k] {
                check_index(*x, d, &ctx)?;
            }
            entries.push((*i, *j, *k, c.parse(&ctx)?));
        }
        let labels = match &self.labels {
            Some(l) if l.len() != d => return Err(invalid(format!("{context}.labels"), format!("expected {d} labels, found {}", l.len()))),
            Some(l) => l.clone(),
            None => (0..d).map(|i| format!("e{i}")).collect(),
        };
        Ok(Algebra::from_entries(d, &entries, unit, labels).map_err(|e| e.to_string()))
    }
}

impl WeakHopfSpec {
    pub fn of<F: Field>(h: &WeakHopf<F>) -> Self {
        let d = h.dim();
        let mut coproduct = Vec::new();
        for i in 0..d {
            for jk in 0..d * d {
                let c = h.delta.get(jk, i);
                if !c.is_zero() {
                    coproduct.push((i, jk / d, jk % d, Scalar::of(c)));
                }
            }
        }
        let mut antipode = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let c = h.antipode.get(j, i);
                if !c.is_zero() {
                    antipode.push((i, j, Scalar::of(c)));
                }
            }
        }
        WeakHopfSpec { algebra: AlgebraSpec::of(&h.alg), coproduct, counit: h.eps.iter().map(Scalar::of).collect(), antipode }
    }

    pub fn build<F: Field>(&self) -> Result<Result<WeakHopf<F>, String>, SpecError> {
        let alg = match self.algebra.build::<F>("payload.algebra")? {
            Ok(a) => a,
            Err(e) => return Ok(Err(e)),
        };
        let d = alg.dim();
        let mut delta = Mat::zeros(d * d, d);
        for (n, (i, j, k, c)) in self.coproduct.iter().enumerate() {
            let ctx = format!("payload.coproduct[{n}]");
            for x in [i, j, k] {
                check_index(*x, d, &ctx)?;
            }
            delta.set(j * d + k, *i, c.parse(&ctx)?);
        }
        let eps = vector(&self.counit, d, "payload.counit")?;
        let mut antipode = Mat::zeros(d, d);
        for (n, (i, j, c)) in self.antipode.iter().enumerate() {
            let ctx = format!("payload.antipode[{n}]");
            check_index(*i, d, &ctx)?;
            check_index(*j, d, &ctx)?;
            antipode.set(*j, *i, c.parse(&ctx)?);
        }
        Ok(WeakHopf::new(alg, delta, eps, antipode).map_err(|e| e.to_string()))
    }
}

impl GroupoidSpec {
    pub fn of(g: &Groupoid) -> Self {
        let ms = g.morphisms();
        let name = |i: usize| ms[i].name.clone();
        GroupoidSpec {
            objects: g.objects().to_vec(),
            morphisms: ms
                .iter()
                .map(|m| MorphismSpec { name: m.name.clone(), source: g.objects()[m.source].clone(), target: g.objects()[m.target].clone() })
                .collect(),
            identities: g.identities().iter().map(|&i| name(i)).collect(),
            composition: g.composition_table().into_iter().map(|(a, b, c)| (name(a), name(b), name(c))).collect(),
            inverses: (0..ms.len()).map(|i| (name(i), name(g.inverse(i)))).collect(),
        }
    }

    pub fn build(&self) -> Result<Result<Groupoid, String>, SpecError> {
        let objects: HashMap<&str, usize> = self.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let names: HashMap<&str, usize> = self.morphisms.iter().enumerate().map(|(i, m)| (m.name.as_str(), i)).collect();
        if objects.len() != self.objects.len() || names.len() != self.morphisms.len() {
            return Err(invalid("payload", "object and morphism names must be distinct"));
        }
        let obj = |s: &str, ctx: String| objects.get(s).copied().ok_or_else(|| invalid(ctx, format!("unknown object {s:?}")));
        let mor = |s: &str, ctx: String| names.get(s).copied().ok_or_else(|| invalid(ctx, format!("unknown morphism {s:?}")));
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        for (n, m) in self.morphisms.iter().enumerate() {
            let ctx = format!("payload.morphisms[{n}]");
            morphisms.push(Morphism { name: m.name.clone(), source: obj(&m.source, ctx.clone())?, target: obj(&m.target, ctx)? });
        }
        let identities = self.identities.iter().enumerate().map(|(n, s)| mor(s, format!("payload.identities[{n}]"))).collect::<Result<Vec<_>, _>>()?;
        let mut compose = Vec::with_capacity(self.composition.len());
        for (n, (a, b, c)) in self.composition.iter().enumerate() {
            let ctx = format!("payload.composition[{n}]");
            compose.push((mor(a, ctx.clone())?, mor(b, ctx.clone())?, mor(c, ctx)?));
        }
        let mut inverse = vec![usize::MAX; morphisms.len()];
        for (n, (a, b)) in self.inverses.iter().enumerate() {
            let ctx = format!("payload.inverses[{n}]");
            let g = mor(a, ctx.clone())?;
            inverse[g] = mor(b, ctx)?;
        }
        if let Some(i) = inverse.iter().position(|&x| x == usize::MAX) {
            return Err(invalid("payload.inverses", format!("no inverse given for {:?}", self.morphisms[i].name)));
        }
        Ok(Groupoid::new(self.objects.clone(), morphisms, identities, &compose, inverse).map_err(|e| e.to_string()))
    }
}

impl MarkovSpec {
    pub fn of<F: Field>(ext: &MarkovExtension<F>) -> Self {
        let incl = &ext.cond.incl;
        let row = |v: &[F]| v.iter().map(Scalar::of).collect::<Vec<_>>();
        MarkovSpec {
            small: AlgebraSpec::of(&incl.small),
            big: AlgebraSpec::of(&incl.big),
            embedding: (0..incl.small.dim()).map(|j| row(&incl.embed.col(j))).collect(),
            expectation: ext.cond.e.to_rows().iter().map(|r| row(r)).collect(),
            trace: row(&ext.trace),
        }
    }

    pub fn build<F: Field>(&self) -> Result<Result<MarkovExtension<F>, String>, SpecError> {
        let small = match self.small.build::<F>("payload.small")? {
            Ok(a) => a,
            Err(e) => return Ok(Err(format!("small algebra: {e}"))),
        };
        let big = match self.big.build::<F>("payload.big")? {
            Ok(a) => a,
            Err(e) => return Ok(Err(format!("big algebra: {e}"))),
        };
        let (n, m) = (small.dim(), big.dim());
        if self.embedding.len() != n {
            return Err(invalid("payload.embedding", format!("expected {n} images, found {}", self.embedding.len())));
        }
        if self.expectation.len() != n {
            return Err(invalid("payload.expectation", format!("expected {n} rows, found {}", self.expectation.len())));
        }
        let cols = self.embedding.iter().enumerate().map(|(j, c)| vector(c, m, &format!("payload.embedding[{j}]"))).collect::<Result<Vec<_>, _>>()?;
        let rows = self.expectation.iter().enumerate().map(|(i, r)| vector(r, m, &format!("payload.expectation[{i}]"))).collect::<Result<Vec<_>, _>>()?;
        let trace = vector(&self.trace, n, "payload.trace")?;
        let e = Mat::from_rows(rows, m).map_err(|e| invalid("payload.expectation", e.to_string()))?;
        let built = Inclusion::new(small, big, Mat::from_cols(&cols, m)).and_then(|incl| CondExpectation::new(incl, e));
        Ok(built.map(|cond| MarkovExtension { cond, trace }).map_err(|e| e.to_string()))
    }
}
