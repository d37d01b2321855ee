//! Shipped target models, the concrete bracket-free backend, and the text
//! formats for model files and homotopy tables.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::abelian::{FgAbGroup, GroupElement, Order};
use crate::cohen::CoordinateAlgebra;
use crate::error::{Error, Result};
use crate::primes::{self, PrimePower};
use crate::whitehead::{Generator, RelationProfile, TargetModel};

/// Environment variable overriding the bundled table path.
pub const TABLE_ENV: &str = "COHENEXP_TABLE";

const BUNDLED_TABLE: &str = include_str!("../data/homotopy_groups.txt");

fn uniform(
    r: usize,
    truncation: usize,
    profile: RelationProfile,
    p: u64,
    t: u32,
) -> Result<TargetModel> {
    primes::require_prime(p)?;
    if t < 1 {
        return Err(Error::arg("generator order exponent t must be at least 1"));
    }
    let order = Order::Finite(PrimePower::new(p, t).value());
    let gens = (1..=truncation)
        .map(|slot| Generator {
            slot,
            order: order.clone(),
        })
        .collect();
    TargetModel::new(r, truncation, profile, gens)
}

/// Formal model of `Ω(S^N)` for odd `N`, one generator of order `p^t` per slot.
pub fn odd_sphere(n: u32, r: usize, truncation: usize, t: u32, p: u64) -> Result<TargetModel> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::arg(format!("odd_sphere needs an odd N >= 3, got {n}")));
    }
    let profile = if n == 3 {
        RelationProfile::S3
    } else {
        RelationProfile::ODD_SPHERE
    };
    uniform(r, truncation, profile, p, t)
}

/// Formal model of `Ω(S^N)` for even `N`, one generator of order `p^t` per slot.
pub fn even_sphere(n: u32, r: usize, truncation: usize, t: u32, p: u64) -> Result<TargetModel> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::arg(format!("even_sphere needs an even N >= 2, got {n}")));
    }
    let profile = if n == 2 {
        RelationProfile::S2
    } else {
        RelationProfile::EVEN_SPHERE
    };
    uniform(r, truncation, profile, p, t)
}

/// Formal model of `Ω(HP^∞)`, one generator of order `p^t` per slot.
pub fn hp_infty_model(r: usize, truncation: usize, p: u64, t: u32) -> Result<TargetModel> {
    uniform(r, truncation, RelationProfile::HP_INFINITY, p, t)
}

/// Relation profile of a formal sphere model.
pub fn sphere_profile(n: u32) -> Result<RelationProfile> {
    match n {
        2 => Ok(RelationProfile::S2),
        3 => Ok(RelationProfile::S3),
        n if n >= 4 && n % 2 == 0 => Ok(RelationProfile::EVEN_SPHERE),
        n if n >= 5 => Ok(RelationProfile::ODD_SPHERE),
        _ => Err(Error::arg(format!("no sphere model for N = {n}"))),
    }
}

/// Shipped relation profiles with their names.
pub fn shipped_profiles() -> Vec<(&'static str, RelationProfile)> {
    vec![
        ("odd-sphere", RelationProfile::ODD_SPHERE),
        ("s3", RelationProfile::S3),
        ("even-sphere", RelationProfile::EVEN_SPHERE),
        ("s2", RelationProfile::S2),
        ("hp-infinity", RelationProfile::HP_INFINITY),
    ]
}

/// A general-purpose model for a profile: one generator per slot, with orders
/// cycling through infinite and small finite values.
pub fn mixed_model(r: usize, truncation: usize, profile: RelationProfile) -> Result<TargetModel> {
    const CYCLE: [Option<u64>; 6] = [None, Some(8), Some(9), None, Some(12), Some(4)];
    let gens = (1..=truncation)
        .map(|slot| Generator {
            slot,
            order: CYCLE[(slot - 1) % CYCLE.len()].map_or(Order::Infinite, Order::finite),
        })
        .collect();
    TargetModel::new(r, truncation, profile, gens)
}

/// A coordinate of the concrete backend: an element of the group in `slot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteClass {
    pub slot: usize,
    pub elem: GroupElement,
}

impl fmt::Display for ConcreteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.elem)
    }
}

/// Bracket-free target whose slot `j` is a concrete group `π_{jr+1}(Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteModel {
    r: usize,
    groups: Vec<Arc<FgAbGroup>>,
}

impl ConcreteModel {
    pub fn new(r: usize, groups: Vec<FgAbGroup>) -> Result<Self> {
        if r < 1 {
            return Err(Error::Validation("r must be at least 1".into()));
        }
        if groups.is_empty() {
            return Err(Error::Validation("truncation must be at least 1".into()));
        }
        Ok(ConcreteModel {
            r,
            groups: groups.into_iter().map(Arc::new).collect(),
        })
    }

    /// Group in slot `j` (1-based).
    pub fn group(&self, slot: usize) -> &Arc<FgAbGroup> {
        &self.groups[slot - 1]
    }

    pub fn groups(&self) -> &[Arc<FgAbGroup>] {
        &self.groups
    }

    /// Class in `slot` with the given coefficients.
    pub fn class(&self, slot: usize, coeffs: &[i64]) -> Result<ConcreteClass> {
        if slot < 1 || slot > self.groups.len() {
            return Err(Error::arg(format!("slot {slot} outside 1..={}", self.groups.len())));
        }
        Ok(ConcreteClass {
            slot,
            elem: GroupElement::from_i64s(Arc::clone(&self.groups[slot - 1]), coeffs)?,
        })
    }
}

impl CoordinateAlgebra for ConcreteModel {
    type Class = ConcreteClass;

    fn r(&self) -> usize {
        self.r
    }

    fn truncation(&self) -> usize {
        self.groups.len()
    }

    fn zero(&self, slot: usize) -> ConcreteClass {
        // brackets may land above the truncation; they are zero there
        let group = self
            .groups
            .get(slot - 1)
            .map_or_else(|| Arc::new(FgAbGroup::trivial()), Arc::clone);
        ConcreteClass {
            slot,
            elem: GroupElement::zero(group),
        }
    }

    fn is_zero(&self, x: &ConcreteClass) -> bool {
        x.elem.is_zero()
    }

    fn check(&self, slot: usize, x: &ConcreteClass) -> Result<()> {
        if x.slot != slot || slot > self.groups.len() || **x.elem.group() != *self.groups[slot - 1] {
            return Err(Error::Validation(format!(
                "element {} does not belong to slot {slot}",
                x.elem
            )));
        }
        let reduced = GroupElement::new(Arc::clone(x.elem.group()), x.elem.coeffs().to_vec())?;
        if reduced != x.elem {
            return Err(Error::Validation(format!("element {} is not reduced", x.elem)));
        }
        Ok(())
    }

    fn add(&self, x: &ConcreteClass, y: &ConcreteClass) -> ConcreteClass {
        ConcreteClass {
            slot: x.slot,
            elem: x.elem.add(&y.elem).expect("same slot"),
        }
    }

    fn scale(&self, x: &ConcreteClass, k: &BigInt) -> ConcreteClass {
        ConcreteClass {
            slot: x.slot,
            elem: x.elem.scale(k),
        }
    }

    fn bracket(&self, x: &ConcreteClass, y: &ConcreteClass) -> ConcreteClass {
        self.zero(x.slot + y.slot)
    }

    fn order(&self, x: &ConcreteClass) -> Order {
        x.elem.order()
    }

    fn linear_order(&self, x: &ConcreteClass) -> Order {
        x.elem.order()
    }

    fn height(&self, x: &ConcreteClass) -> BigUint {
        x.elem.coeffs().iter().map(|c| c.magnitude().clone()).max().unwrap_or_default()
    }

    fn truncated(&self, truncation: usize) -> Result<Self> {
        if truncation < 1 || truncation > self.groups.len() {
            return Err(Error::arg(format!(
                "truncation {truncation} outside 1..={}",
                self.groups.len()
            )));
        }
        Ok(ConcreteModel {
            r: self.r,
            groups: self.groups[..truncation].to_vec(),
        })
    }

    fn generic_p_torsion(&self, p: u64) -> Result<(Self, Vec<ConcreteClass>)> {
        primes::require_prime(p)?;
        let coords = self
            .groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                // d / p^v on each factor of order d with v = v_p(d) > 0
                let coeffs = g
                    .factors()
                    .iter()
                    .map(|d| {
                        let v = if d.is_zero() { 0 } else { primes::valuation(d, p) };
                        if v == 0 {
                            BigInt::zero()
                        } else {
                            BigInt::from(d / PrimePower::new(p, v).value())
                        }
                    })
                    .collect();
                ConcreteClass {
                    slot: i + 1,
                    elem: GroupElement::new(Arc::clone(g), coeffs).expect("sized to the group"),
                }
            })
            .collect();
        Ok((self.clone(), coords))
    }
}

/// `[Ω(S^{r+1}), Ω(S^3)]` truncated at `truncation`: slot `j` carries
/// `π_{jr+1}(S^3)` from the table and every bracket vanishes.
pub fn concrete_h_space(table: &HomotopyTable, r: usize, truncation: usize) -> Result<ConcreteModel> {
    if r < 1 || truncation < 1 {
        return Err(Error::arg("r and truncation must be at least 1"));
    }
    let groups = (1..=truncation)
        .map(|j| {
            let k = (j * r + 1 - 3) as u32;
            table.get(3, k).cloned()
        })
        .collect::<Result<Vec<_>>>()?;
    ConcreteModel::new(r, groups)
}

/// `π_{n+k}(S^n)` for a range of `(n, k)`, with a free-text source tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyTable {
    entries: BTreeMap<(u32, u32), FgAbGroup>,
    provenance: String,
}

impl HomotopyTable {
    /// Builds and validates a table.
    pub fn new(entries: BTreeMap<(u32, u32), FgAbGroup>, provenance: impl Into<String>) -> Result<Self> {
        let table = HomotopyTable {
            entries,
            provenance: provenance.into(),
        };
        table.validate()?;
        Ok(table)
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), FgAbGroup> {
        &self.entries
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// `π_{n+k}(S^n)`.
    pub fn get(&self, n: u32, k: u32) -> Result<&FgAbGroup> {
        self.entries.get(&(n, k)).ok_or(Error::MissingEntry { n, k })
    }

    /// `π_{n+k}(S^n)`, falling back to the largest tabulated sphere when `k`
    /// is in its stable range.
    pub fn get_stable(&self, n: u32, k: u32) -> Result<&FgAbGroup> {
        if let Some(g) = self.entries.get(&(n, k)) {
            return Ok(g);
        }
        let top = self
            .entries
            .keys()
            .filter(|&&(m, kk)| kk == k && m < n && k + 2 <= m)
            .map(|&(m, _)| m)
            .max();
        match top {
            Some(m) => Ok(&self.entries[&(m, k)]),
            None => Err(Error::MissingEntry { n, k }),
        }
    }

    /// Largest stem with at least one entry.
    pub fn max_stem(&self) -> u32 {
        self.entries.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// Checks `π_n(S^n) = Z` and agreement across the stable range
    /// `k <= n - 2` between neighbouring spheres.
    pub fn validate(&self) -> Result<()> {
        for (&(n, k), g) in &self.entries {
            if n < 1 {
                return Err(Error::Validation(format!("entry for S^{n} is not a sphere")));
            }
            if k == 0 && g.factors() != [BigUint::zero()] {
                return Err(Error::Validation(format!(
                    "pi_{n}(S^{n}) must be Z, found {g}"
                )));
            }
            if k + 2 <= n {
                if let Some(next) = self.entries.get(&(n + 1, k)) {
                    if next.sorted_factors() != g.sorted_factors() {
                        return Err(Error::Validation(format!(
                            "stable range violated: pi_{{{n}+{k}}}(S^{n}) = {g} but pi_{{{}+{k}}}(S^{}) = {next}",
                            n + 1,
                            n + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the `pi <n> <k> <d1,d2,...>` format. A comment starting with
    /// `# provenance:` sets the source tag.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut provenance = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(p) = comment.trim().strip_prefix("provenance:") {
                    provenance = p.trim().to_string();
                }
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "pi" {
                return Err(Error::parse(line_no, format!("expected 'pi <n> <k> <factors>', got '{line}'")));
            }
            let n: u32 = fields[1]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad sphere dimension '{}'", fields[1])))?;
            let k: u32 = fields[2]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad stem '{}'", fields[2])))?;
            let group = parse_factors(fields[3]).map_err(|m| Error::parse(line_no, m))?;
            if entries.insert((n, k), group).is_some() {
                return Err(Error::parse(line_no, format!("duplicate entry for ({n}, {k})")));
            }
        }
        Self::new(entries, provenance)
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        if !self.provenance.is_empty() {
            out.push_str(&format!("# provenance: {}\n", self.provenance));
        }
        for (&(n, k), g) in &self.entries {
            out.push_str(&format!("pi {n} {k} {}\n", format_factors(g)));
        }
        out
    }
}

fn parse_factors(s: &str) -> std::result::Result<FgAbGroup, String> {
    if s == "-" {
        return Ok(FgAbGroup::trivial());
    }
    let factors = s
        .split(',')
        .map(|d| {
            d.parse::<BigUint>()
                .map_err(|_| format!("malformed factor '{d}'"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    FgAbGroup::new(factors).map_err(|e| e.to_string())
}

fn format_factors(g: &FgAbGroup) -> String {
    if g.factors().is_empty() {
        return "-".into();
    }
    g.factors()
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The table shipped with the crate.
pub fn bundled_table() -> HomotopyTable {
    HomotopyTable::parse(BUNDLED_TABLE).expect("bundled table is valid")
}

/// The table at `$COHENEXP_TABLE`, or the bundled one when unset.
pub fn table_from_env() -> Result<HomotopyTable> {
    match std::env::var_os(TABLE_ENV) {
        Some(path) => load_table(Path::new(&path)),
        None => Ok(bundled_table()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_table(path: &Path) -> Result<HomotopyTable> {
    HomotopyTable::parse(&read(path)?)
}

pub fn load_model(path: &Path) -> Result<TargetModel> {
    parse_model(&read(path)?)
}

pub fn save_model(model: &TargetModel, path: &Path) -> Result<()> {
    fs::write(path, format_model(model)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn key_value<'a>(field: &'a str, key: &str, line: usize) -> Result<&'a str> {
    field
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected '{key}=<value>', got '{field}'")))
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("malformed integer '{s}'")))
}

/// Parses the model format:
///
/// ```text
/// model r=<int> trunc=<int> profile u2=<int> u3=<int>
/// gen <slot> order=<int|inf>
/// ```
pub fn parse_model(text: &str) -> Result<TargetModel> {
    let mut header: Option<(usize, usize, u64, u64, usize)> = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "model" => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate model header"));
                }
                if fields.len() != 6 || fields[3] != "profile" {
                    return Err(Error::parse(
                        line_no,
                        "expected 'model r=<int> trunc=<int> profile u2=<int> u3=<int>'",
                    ));
                }
                let r = parse_int(key_value(fields[1], "r", line_no)?, line_no)?;
                let trunc = parse_int(key_value(fields[2], "trunc", line_no)?, line_no)?;
                let u2 = parse_int(key_value(fields[4], "u2", line_no)?, line_no)?;
                let u3 = parse_int(key_value(fields[5], "u3", line_no)?, line_no)?;
                header = Some((r, trunc, u2, u3, line_no));
            }
            "gen" => {
                if header.is_none() {
                    return Err(Error::parse(line_no, "generator before the model header"));
                }
                if fields.len() != 3 {
                    return Err(Error::parse(line_no, "expected 'gen <slot> order=<int|inf>'"));
                }
                let slot = parse_int(fields[1], line_no)?;
                let order = match key_value(fields[2], "order", line_no)? {
                    "inf" => Order::Infinite,
                    s => Order::Finite(parse_int(s, line_no)?),
                };
                if order.as_finite().is_some_and(|d| d.is_zero()) {
                    return Err(Error::parse(line_no, "generator order must be positive or inf"));
                }
                gens.push(Generator { slot, order });
            }
            other => return Err(Error::parse(line_no, format!("unknown directive '{other}'"))),
        }
    }
    let (r, trunc, u2, u3, line_no) = header.ok_or_else(|| Error::parse(1, "missing model header"))?;
    let profile = RelationProfile::new(u2, u3).map_err(|e| Error::parse(line_no, e.to_string()))?;
    TargetModel::new(r, trunc, profile, gens)
}

pub fn format_model(model: &TargetModel) -> String {
    let p = model.profile();
    let mut out = format!(
        "model r={} trunc={} profile u2={} u3={}\n",
        model.r(),
        model.truncation(),
        p.u2,
        p.u3
    );
    for g in model.generators() {
        let order = match &g.order {
            Order::Infinite => "inf".to_string(),
            Order::Finite(d) => d.to_string(),
        };
        out.push_str(&format!("gen {} order={order}\n", g.slot));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohen::{group_p_exponent, CohenElement, ElementOrder};

    #[test]
    fn bundled_table_is_consistent() {
        let t = bundled_table();
        assert!(t.provenance().contains("Toda"));
        for k in 0..=10 {
            assert!(t.get(3, k).is_ok(), "pi_(3+{k})(S^3)");
        }
        assert_eq!(t.get(3, 3).unwrap().to_string(), "Z12");
        assert_eq!(t.get(3, 7).unwrap().to_string(), "Z15");
        assert_eq!(t.get(3, 8).unwrap().to_string(), "Z2");
        t.validate().unwrap();
    }

    #[test]
    fn stable_lookup_falls_back() {
        let t = bundled_table();
        assert_eq!(t.get_stable(20, 7).unwrap().to_string(), "Z240");
        assert_eq!(t.get_stable(20, 3).unwrap().to_string(), "Z24");
        assert!(t.get_stable(20, 11).is_err());
        // k = 10 at n = 11 is outside the stable range of S^11; S^12 is fine
        assert_eq!(t.get_stable(13, 10).unwrap().to_string(), "Z6");
    }

    #[test]
    fn table_round_trip() {
        let t = bundled_table();
        assert_eq!(HomotopyTable::parse(&t.format()).unwrap(), t);
    }

    #[test]
    fn table_parse_errors_carry_lines() {
        let err = HomotopyTable::parse("pi 3 0 0\npi 3 1 0x\n").unwrap_err();
        assert_eq!(err, Error::parse(2, "malformed factor '0x'"));
        assert!(matches!(HomotopyTable::parse("pi 3 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(HomotopyTable::parse("pi 3 1 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn inconsistent_stable_range_is_rejected() {
        let err = HomotopyTable::parse("pi 5 3 24\npi 6 3 12\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
        assert!(matches!(HomotopyTable::parse("pi 4 0 2\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn model_round_trip_and_errors() {
        let m = mixed_model(2, 7, RelationProfile::HP_INFINITY).unwrap();
        let text = format_model(&m);
        assert_eq!(parse_model(&text).unwrap(), m);
        let bad = "model r=1 trunc=4 profile u2=0 u3=3\ngen 1 order=0x\n";
        assert!(matches!(parse_model(bad), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_model("gen 1 order=3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_model("model r=1 trunc=4 profile u2=0 u3=5\n"), Err(Error::Parse { line: 1, .. })));
        let commented = "# odd sphere\nmodel r=1 trunc=2 profile u2=2 u3=1 # header\ngen 1 order=inf\n\ngen 2 order=9\n";
        let m = parse_model(commented).unwrap();
        assert_eq!(m.generators().len(), 2);
    }

    #[test]
    fn model_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("cohen-core-model-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.model");
        let m = odd_sphere(7, 2, 5, 2, 3).unwrap();
        save_model(&m, &path).unwrap();
        assert_eq!(load_model(&path).unwrap(), m);
        fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(load_model(&path), Err(Error::Io { .. })));
    }

    #[test]
    fn sphere_constructors() {
        assert_eq!(odd_sphere(3, 1, 4, 1, 3).unwrap().profile(), RelationProfile::S3);
        assert_eq!(odd_sphere(5, 1, 4, 1, 3).unwrap().profile(), RelationProfile::ODD_SPHERE);
        assert!(odd_sphere(4, 1, 4, 1, 3).is_err());
        assert_eq!(even_sphere(2, 1, 4, 1, 3).unwrap().profile(), RelationProfile::S2);
        assert_eq!(even_sphere(4, 1, 4, 1, 3).unwrap().profile(), RelationProfile::EVEN_SPHERE);
        assert!(even_sphere(5, 1, 4, 1, 3).is_err());
        assert!(hp_infty_model(1, 4, 6, 1).is_err());
    }

    #[test]
    fn shipped_profiles_match_relations() {
        // (profile, u2, u3)
        let table = [
            (sphere_profile(5).unwrap(), 2, 1), // 2[α, β] = 0, triples vanish
            (sphere_profile(3).unwrap(), 1, 1), // S^3 is a group
            (sphere_profile(6).unwrap(), 0, 3), // 3[[α, β], γ] = 0
            (sphere_profile(2).unwrap(), 0, 1), // triples vanish on S^2
            (RelationProfile::HP_INFINITY, 12, 3),
        ];
        for (p, u2, u3) in table {
            assert_eq!((p.u2, p.u3, p.w4_vanish), (u2, u3, true));
        }
        assert!(sphere_profile(1).is_err());
    }

    #[test]
    fn odd_sphere_exponent_example() {
        let m = odd_sphere(5, 1, 8, 2, 3).unwrap();
        let g = group_p_exponent(&m, 3).unwrap();
        assert_eq!(g.value().unwrap().exact_value(), Some(9u32.into()));
    }

    #[test]
    fn even_sphere_odd_prime_is_exact() {
        let m = even_sphere(4, 1, 8, 2, 5).unwrap();
        let g = group_p_exponent(&m, 5).unwrap();
        assert_eq!(g.value().unwrap().to_string(), "exact 5^2");
    }

    #[test]
    fn concrete_s3_groups() {
        let t = bundled_table();
        let m = concrete_h_space(&t, 2, 5).unwrap();
        let names: Vec<String> = m.groups().iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["Z", "Z2", "Z2", "Z3", "Z2"]);
        assert_eq!(group_p_exponent(&m, 3).unwrap().value().unwrap().to_string(), "exact 3^1");
        let one = concrete_h_space(&t, 2, 1).unwrap();
        assert_eq!(one.groups().len(), 1);
        assert_eq!(one.group(1).to_string(), "Z");
        assert!(concrete_h_space(&t, 2, 6).is_ok());
        assert_eq!(concrete_h_space(&t, 2, 7).unwrap_err(), Error::MissingEntry { n: 3, k: 12 });
    }

    #[test]
    fn concrete_element_order_from_table() {
        // π_6(S^3) = Z12 sits in slot 1 for r = 5
        let t = bundled_table();
        let m = Arc::new(concrete_h_space(&t, 5, 2).unwrap());
        let a = CohenElement::from_slots(Arc::clone(&m), [(1, m.class(1, &[1]).unwrap())]).unwrap();
        let brute = (1..=100u64).find(|&k| a.pow(k).is_identity()).unwrap();
        assert_eq!(brute, 12);
        assert_eq!(a.order(), ElementOrder::Finite(12u32.into()));
        // order 6 is not a 2-power, so the torsion probe does not apply
        let b = CohenElement::from_slots(Arc::clone(&m), [(1, m.class(1, &[2]).unwrap())]).unwrap();
        assert!(matches!(b.torsion_coordinates_check(2), Err(Error::NotApplicable(_))));
    }
}
