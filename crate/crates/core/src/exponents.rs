//! p-primary exponents of spheres and of Cohen groups `[Ω(S^{r+1}), Ω(Y)]`.
//!
//! Values are exact prime powers where a theorem pins them down and intervals
//! where only bounds are known. Every value carries the rules that produced it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::primes::{self, PrimePower};
use crate::targets::HomotopyTable;

/// A transport rule or database entry used to derive an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    OddSphere,
    SelickS3,
    EvenSphere,
    TableLowerBound,
    JamesOddSphereBound,
    EvenSphereTwoBound,
    CohenSphere,
    CohenEvenSphereTwo,
    SpaceForm,
    Covering,
    ComplexProjective,
    QuaternionicInfinity,
    QuaternionicFinite,
    QuaternionicSubTerm,
    ExactSequenceSandwich,
    ProductMax,
    SymbolicCertificate,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::OddSphere => "odd-sphere",
            Rule::SelickS3 => "selick-s3",
            Rule::EvenSphere => "even-sphere",
            Rule::TableLowerBound => "table-lower-bound",
            Rule::JamesOddSphereBound => "james-bound",
            Rule::EvenSphereTwoBound => "even-sphere-2-bound",
            Rule::CohenSphere => "cohen-sphere",
            Rule::CohenEvenSphereTwo => "cohen-even-sphere-2",
            Rule::SpaceForm => "space-form",
            Rule::Covering => "covering",
            Rule::ComplexProjective => "complex-projective",
            Rule::QuaternionicInfinity => "quaternionic-infinity",
            Rule::QuaternionicFinite => "quaternionic-finite",
            Rule::QuaternionicSubTerm => "quaternionic-sub-term",
            Rule::ExactSequenceSandwich => "exact-sequence",
            Rule::ProductMax => "product-max",
            Rule::SymbolicCertificate => "symbolic-certificate",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Rule::OddSphere => "Cohen-Moore-Neisendorfer: exp_p(S^{2n+1}) = p^n for odd p",
            Rule::SelickS3 => "Selick: exp_p(S^3) = p for odd p",
            Rule::EvenSphere => "odd-primary splitting of S^{2n}: exp_p(S^{2n}) = p^{2n-1}",
            Rule::TableLowerBound => "lower bound: largest 2-power element order in the bundled homotopy table",
            Rule::JamesOddSphereBound => "James: exp_2(S^{2n+1}) <= 2^{2n}",
            Rule::EvenSphereTwoBound => "exp_2(S^{2n}) <= 4^{2n}",
            Rule::CohenSphere => "Cohen-group exponent equals the sphere exponent: exp_p[Ω(S^{r+1}), Ω(S^N)] = exp_p(S^N) for odd p, or p = 2 and N odd",
            Rule::CohenEvenSphereTwo => "Cohen-group 2-exponent of an even sphere: exp_2(S^N) <= exp_2[Ω(S^{r+1}), Ω(S^N)] <= 2 exp_2(S^N)",
            Rule::SpaceForm => "homotopy space forms and RP^n: the universal cover S^n induces an isomorphism of Cohen groups",
            Rule::Covering => "covering maps induce isomorphisms of Cohen groups",
            Rule::ComplexProjective => "CP^n: split exact sequence gives exp_p[Ω(S^{r+1}), Ω(CP^n)] = exp_p[Ω(S^{r+1}), Ω(S^{2n+1})]",
            Rule::QuaternionicInfinity => "HP^∞: exp_p[Ω(S^{r+1}), Ω(HP^∞)] = exp_p(S^4) = p^3 for odd p, at most 2 exp_2(S^4) for p = 2",
            Rule::QuaternionicFinite => "HP^n: exact sequence 1 → [Ω(S^{r+1}), Ω(S^{4n+3})] → [Ω(S^{r+1}), Ω(HP^n)] → [Ω(S^{r+1}), Ω(HP^∞)] → 1",
            Rule::QuaternionicSubTerm => "HP^n sub-term taken as S^{4n+3} from the exact sequence; a printed variant of the final inequality names S^{2n+1} instead",
            Rule::ExactSequenceSandwich => "exact sequence: exp_p(G') <= exp_p(G) <= exp_p(G') exp_p(G'')",
            Rule::ProductMax => "product: the exponent is the maximum over the factors",
            Rule::SymbolicCertificate => "symbolic certificate on the generic p-torsion tuple with a single-coordinate witness",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.tag(), self.statement())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentKind {
    NoTorsion,
    Exact(u32),
    Interval { lower: u32, upper: u32 },
}

/// `exp_p` of a space or group, as an exact power of `p` or a certified interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentValue {
    prime: u64,
    kind: ExponentKind,
    provenance: Vec<Rule>,
}

impl ExponentValue {
    pub fn exact(prime: u64, exp: u32) -> Self {
        Self::interval(prime, exp, exp)
    }

    pub fn no_torsion(prime: u64) -> Self {
        Self::exact(prime, 0)
    }

    /// `[p^lower, p^upper]`, collapsed to an exact value when the ends meet.
    pub fn interval(prime: u64, lower: u32, upper: u32) -> Self {
        assert!(lower <= upper, "interval [{lower}, {upper}] is empty");
        let kind = match (lower, upper) {
            (0, 0) => ExponentKind::NoTorsion,
            (l, u) if l == u => ExponentKind::Exact(l),
            (lower, upper) => ExponentKind::Interval { lower, upper },
        };
        ExponentValue {
            prime,
            kind,
            provenance: Vec::new(),
        }
    }

    /// Appends a rule to the provenance, keeping each rule once.
    pub fn with(mut self, rule: Rule) -> Self {
        if !self.provenance.contains(&rule) {
            self.provenance.push(rule);
        }
        self
    }

    fn with_all(mut self, rules: &[Rule]) -> Self {
        for &r in rules {
            self = self.with(r);
        }
        self
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn kind(&self) -> ExponentKind {
        self.kind
    }

    pub fn provenance(&self) -> &[Rule] {
        &self.provenance
    }

    pub fn lower(&self) -> PrimePower {
        PrimePower::new(self.prime, self.bounds().0)
    }

    pub fn upper(&self) -> PrimePower {
        PrimePower::new(self.prime, self.bounds().1)
    }

    /// `(lower, upper)` exponents of `p`.
    pub fn bounds(&self) -> (u32, u32) {
        match self.kind {
            ExponentKind::NoTorsion => (0, 0),
            ExponentKind::Exact(e) => (e, e),
            ExponentKind::Interval { lower, upper } => (lower, upper),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, ExponentKind::Interval { .. })
    }

    /// The exact value `p^e`, if known.
    pub fn exact_value(&self) -> Option<BigUint> {
        self.is_exact().then(|| self.upper().value())
    }

    pub fn contains(&self, exp: u32) -> bool {
        let (l, u) = self.bounds();
        l <= exp && exp <= u
    }
}

impl fmt::Display for ExponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prime;
        match self.kind {
            ExponentKind::NoTorsion => f.write_str("no-torsion"),
            ExponentKind::Exact(e) => write!(f, "exact {p}^{e}"),
            ExponentKind::Interval { lower, upper } => {
                write!(f, "interval [{p}^{lower}, {p}^{upper}]")
            }
        }
    }
}

/// Spaces the exponent calculator knows about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDescriptor {
    Sphere(u32),
    /// A homotopy space form `Σ(n)/G` covered by a homotopy `n`-sphere.
    SpaceForm(u32),
    RealProjective(u32),
    ComplexProjective(u32),
    QuaternionicProjective(u32),
    QuaternionicProjectiveInfinity,
    Product(Vec<SpaceDescriptor>),
    /// A space covered by `base`, e.g. `base/G` for a free action.
    Cover(Box<SpaceDescriptor>),
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDescriptor::Sphere(n) => write!(f, "S:{n}"),
            SpaceDescriptor::SpaceForm(n) => write!(f, "SF:{n}"),
            SpaceDescriptor::RealProjective(n) => write!(f, "RP:{n}"),
            SpaceDescriptor::ComplexProjective(n) => write!(f, "CP:{n}"),
            SpaceDescriptor::QuaternionicProjective(n) => write!(f, "HP:{n}"),
            SpaceDescriptor::QuaternionicProjectiveInfinity => f.write_str("HP:inf"),
            SpaceDescriptor::Product(parts) => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "prod({})", parts.join(","))
            }
            SpaceDescriptor::Cover(base) => write!(f, "cover({base})"),
        }
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    /// Grammar: `S:N`, `SF:n`, `RP:n`, `CP:n`, `HP:n`, `HP:inf`,
    /// `prod(d,d,...)`, `cover(d)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::arg(format!("cannot parse space descriptor '{s}'"));
        if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner).ok_or_else(bad)?;
            if parts.is_empty() {
                return Err(bad());
            }
            return parts
                .iter()
                .map(|p| p.parse())
                .collect::<Result<Vec<_>>>()
                .map(SpaceDescriptor::Product);
        }
        if let Some(inner) = s.strip_prefix("cover(").and_then(|r| r.strip_suffix(')')) {
            return Ok(SpaceDescriptor::Cover(Box::new(inner.parse()?)));
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        if kind == "HP" && arg == "inf" {
            return Ok(SpaceDescriptor::QuaternionicProjectiveInfinity);
        }
        let n: u32 = arg.parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(Error::arg(format!("dimension parameter in '{s}' must be at least 1")));
        }
        match kind {
            "S" => Ok(SpaceDescriptor::Sphere(n)),
            "SF" => Ok(SpaceDescriptor::SpaceForm(n)),
            "RP" => Ok(SpaceDescriptor::RealProjective(n)),
            "CP" => Ok(SpaceDescriptor::ComplexProjective(n)),
            "HP" => Ok(SpaceDescriptor::QuaternionicProjective(n)),
            _ => Err(bad()),
        }
    }
}

fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    if !s.trim().is_empty() {
        parts.push(s[start..].trim());
    }
    Some(parts)
}

/// Largest power of `p` dividing the order of an element of `π_{N+k}(S^N)`,
/// `1 <= k`, over every stem the table covers.
fn table_lower_bound(table: &HomotopyTable, n: u32, p: u64) -> u32 {
    (1..=table.max_stem())
        .filter_map(|k| table.get_stable(n, k).ok())
        .filter_map(|g| g.p_exponent(p).ok())
        .map(|e| e.exp)
        .max()
        .unwrap_or(0)
}

/// `exp_p(S^N)`.
pub fn sphere_exponent(table: &HomotopyTable, n: u32, p: u64) -> Result<ExponentValue> {
    primes::require_prime(p)?;
    if n < 2 {
        return Err(Error::arg(format!("sphere dimension must be at least 2, got {n}")));
    }
    let half = n / 2;
    if p != 2 {
        return Ok(if n % 2 == 1 {
            let v = ExponentValue::exact(p, half).with(Rule::OddSphere);
            if n == 3 {
                v.with(Rule::SelickS3)
            } else {
                v
            }
        } else {
            ExponentValue::exact(p, 2 * half - 1).with(Rule::EvenSphere)
        });
    }
    let (upper, rule) = if n % 2 == 1 {
        (2 * half, Rule::JamesOddSphereBound)
    } else {
        (4 * half, Rule::EvenSphereTwoBound)
    };
    let lower = table_lower_bound(table, n, 2).min(upper);
    Ok(ExponentValue::interval(2, lower, upper).with_all(&[Rule::TableLowerBound, rule]))
}

/// `exp_p[Ω(S^{r+1}), Ω(Y)]`.
pub fn cohen_exponent(
    table: &HomotopyTable,
    space: &SpaceDescriptor,
    r: u32,
    p: u64,
) -> Result<ExponentValue> {
    primes::require_prime(p)?;
    if r < 1 {
        return Err(Error::arg("r must be at least 1"));
    }
    match space {
        SpaceDescriptor::Sphere(n) => cohen_sphere(table, *n, p),
        SpaceDescriptor::SpaceForm(n) | SpaceDescriptor::RealProjective(n) => {
            Ok(cohen_sphere(table, *n, p)?.with(Rule::SpaceForm))
        }
        SpaceDescriptor::Cover(base) => Ok(cohen_exponent(table, base, r, p)?.with(Rule::Covering)),
        SpaceDescriptor::ComplexProjective(n) => {
            Ok(cohen_sphere(table, 2 * n + 1, p)?.with(Rule::ComplexProjective))
        }
        SpaceDescriptor::QuaternionicProjectiveInfinity => hp_infinity(table, r, p),
        SpaceDescriptor::QuaternionicProjective(n) => {
            let sub = cohen_sphere(table, 4 * n + 3, p)?;
            let quot = hp_infinity(table, r, p)?;
            Ok(ses_combine(&sub, &quot)?.with_all(&[
                Rule::QuaternionicFinite,
                Rule::QuaternionicSubTerm,
            ]))
        }
        SpaceDescriptor::Product(parts) => {
            let values = parts
                .iter()
                .map(|d| cohen_exponent(table, d, r, p))
                .collect::<Result<Vec<_>>>()?;
            product_max(p, &values)
        }
    }
}

fn cohen_sphere(table: &HomotopyTable, n: u32, p: u64) -> Result<ExponentValue> {
    if n < 2 {
        return Err(Error::NotApplicable(format!(
            "no exponent rule covers the sphere S^{n}"
        )));
    }
    let base = sphere_exponent(table, n, p)?;
    if p != 2 || n % 2 == 1 {
        return Ok(base.with(Rule::CohenSphere));
    }
    let (lower, upper) = base.bounds();
    Ok(ExponentValue::interval(2, lower, upper + 1)
        .with_all(base.provenance())
        .with(Rule::CohenEvenSphereTwo))
}

fn hp_infinity(table: &HomotopyTable, r: u32, p: u64) -> Result<ExponentValue> {
    if p != 2 {
        return Ok(ExponentValue::exact(p, 3)
            .with(Rule::QuaternionicInfinity)
            .with(Rule::EvenSphere));
    }
    // π_{jr+1}(HP^∞) ≅ π_{jr}(S^3) sits in slot j
    let mut lower = 0;
    for j in 1.. {
        let Some(k) = (j * r).checked_sub(3) else {
            continue;
        };
        if k > table.max_stem() {
            break;
        }
        if k >= 1 {
            if let Ok(g) = table.get(3, k) {
                lower = lower.max(g.p_exponent(2)?.exp);
            }
        }
    }
    let (_, s4_upper) = sphere_exponent(table, 4, 2)?.bounds();
    Ok(ExponentValue::interval(2, lower.min(s4_upper + 1), s4_upper + 1).with_all(&[
        Rule::TableLowerBound,
        Rule::EvenSphereTwoBound,
        Rule::QuaternionicInfinity,
    ]))
}

/// Bounds for `exp_p(G)` from a short exact sequence `1 → G' → G → G'' → 1`.
pub fn ses_combine(sub: &ExponentValue, quot: &ExponentValue) -> Result<ExponentValue> {
    if sub.prime != quot.prime {
        return Err(Error::arg(format!(
            "prime mismatch: {} and {}",
            sub.prime, quot.prime
        )));
    }
    let (l, u) = sub.bounds();
    let (_, qu) = quot.bounds();
    Ok(ExponentValue::interval(sub.prime, l, u + qu)
        .with_all(sub.provenance())
        .with_all(quot.provenance())
        .with(Rule::ExactSequenceSandwich))
}

/// Exponent of a product: the maximum of the factors' exponents.
pub fn product_max(p: u64, values: &[ExponentValue]) -> Result<ExponentValue> {
    let (mut lower, mut upper) = (0, 0);
    for v in values {
        if v.prime != p {
            return Err(Error::arg(format!("prime mismatch: {} and {p}", v.prime)));
        }
        let (l, u) = v.bounds();
        lower = lower.max(l);
        upper = upper.max(u);
    }
    let rules = values.iter().flat_map(|v| v.provenance().iter().copied()).collect::<Vec<_>>();
    Ok(ExponentValue::interval(p, lower, upper)
        .with_all(&rules)
        .with(Rule::ProductMax))
}
