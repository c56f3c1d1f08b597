use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{invalid, Error, Result};

/// Largest domain for which the all-functions class is materialized.
pub const MAX_ALL_FUNCTIONS_DOMAIN: usize = 20;

/// Largest domain representable by explicit 64-bit truth tables.
pub const MAX_TABLE_DOMAIN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Projection,
    Table,
}

/// Identifies a concept inside its class.
///
/// Stored 0-based; [`ConceptId::number`] gives the 1-based label used in
/// output and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptId {
    pub kind: ClassKind,
    index: usize,
}

impl ConceptId {
    /// The projection `c_i`, with `i` 1-based.
    pub fn projection(i: usize) -> Self {
        assert!(i >= 1, "projection indices are 1-based");
        Self { kind: ClassKind::Projection, index: i - 1 }
    }

    /// The `k`-th table (1-based).
    pub fn table(k: usize) -> Self {
        assert!(k >= 1, "table indices are 1-based");
        Self { kind: ClassKind::Table, index: k - 1 }
    }

    pub(crate) fn from_index(kind: ClassKind, index: usize) -> Self {
        Self { kind, index }
    }

    /// 0-based position in the class.
    #[inline]
    pub fn index(&self) -> usize {
        self.index
    }

    /// 1-based label.
    #[inline]
    pub fn number(&self) -> usize {
        self.index + 1
    }
}

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ClassKind::Projection => write!(f, "c{}", self.number()),
            ClassKind::Table => write!(f, "t{}", self.number()),
        }
    }
}

/// The class `C_n` of coordinate projections `c_i(x) = x[i]` on `{0,1}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionClass {
    n: usize,
}

impl ProjectionClass {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "projection class needs n >= 1"));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check(&self, id: ConceptId) -> Result<()> {
        if id.kind != ClassKind::Projection {
            return Err(Error::ConceptKindMismatch);
        }
        if id.index >= self.n {
            return Err(Error::ConceptOutOfRange { index: id.number(), size: self.n });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tables {
    Explicit(Vec<u64>),
    /// Every mask in `0..2^D`; table `k` is the mask `k`.
    All,
}

/// A finite class given by truth tables over an enumerated domain.
///
/// Bit `j` of a table mask is the concept's value on `domain[j]`.
#[derive(Debug, Clone)]
pub struct TableClass {
    domain: Vec<Point>,
    lookup: HashMap<Point, usize>,
    tables: Tables,
}

impl PartialEq for TableClass {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.tables == other.tables
    }
}

impl TableClass {
    pub fn new(domain: Vec<Point>, tables: Vec<u64>) -> Result<Self> {
        let lookup = index_domain(&domain, MAX_TABLE_DOMAIN)?;
        let d = domain.len();
        if let Some(bad) = tables.iter().find(|&&t| d < 64 && t >> d != 0) {
            return Err(invalid("tables", format!("table {bad:#b} has bits beyond the {d}-point domain")));
        }
        Ok(Self { domain, lookup, tables: Tables::Explicit(tables) })
    }

    /// Parses tables written as '0'/'1' strings in domain order.
    pub fn from_strings<S: AsRef<str>>(domain: Vec<Point>, tables: &[S]) -> Result<Self> {
        let d = domain.len();
        let masks = tables.iter().map(|s| parse_table(s.as_ref(), d)).collect::<Result<Vec<_>>>()?;
        Self::new(domain, masks)
    }

    /// The class of all `2^D` functions on `domain`.
    pub fn all_functions(domain: Vec<Point>) -> Result<Self> {
        let lookup = index_domain(&domain, MAX_ALL_FUNCTIONS_DOMAIN)?;
        Ok(Self { domain, lookup, tables: Tables::All })
    }

    pub fn domain(&self) -> &[Point] {
        &self.domain
    }

    pub fn is_all_functions(&self) -> bool {
        matches!(self.tables, Tables::All)
    }

    pub fn len(&self) -> usize {
        match &self.tables {
            Tables::Explicit(t) => t.len(),
            Tables::All => 1usize << self.domain.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Truth-table mask of the concept at 0-based position `k`.
    #[inline]
    pub fn mask(&self, k: usize) -> u64 {
        match &self.tables {
            Tables::Explicit(t) => t[k],
            Tables::All => k as u64,
        }
    }

    pub fn domain_index(&self, x: &Point) -> Result<usize> {
        self.lookup.get(x).copied().ok_or_else(|| Error::PointNotInDomain(x.to_string()))
    }

    pub fn check(&self, id: ConceptId) -> Result<()> {
        if id.kind != ClassKind::Table {
            return Err(Error::ConceptKindMismatch);
        }
        if id.index >= self.len() {
            return Err(Error::ConceptOutOfRange { index: id.number(), size: self.len() });
        }
        Ok(())
    }

    /// Table rendered in domain order.
    pub fn table_string(&self, k: usize) -> String {
        let m = self.mask(k);
        (0..self.domain.len()).map(|j| if (m >> j) & 1 == 1 { '1' } else { '0' }).collect()
    }
}

fn index_domain(domain: &[Point], limit: usize) -> Result<HashMap<Point, usize>> {
    if domain.len() > limit {
        return Err(Error::DomainTooLarge { size: domain.len(), limit });
    }
    if let Some(first) = domain.first() {
        if let Some(p) = domain.iter().find(|p| p.len() != first.len()) {
            return Err(Error::DimensionMismatch { expected: first.len(), found: p.len() });
        }
    }
    let mut lookup = HashMap::with_capacity(domain.len());
    for (j, p) in domain.iter().enumerate() {
        if lookup.insert(p.clone(), j).is_some() {
            return Err(invalid("domain", format!("duplicate point {p}")));
        }
    }
    Ok(lookup)
}

fn parse_table(s: &str, d: usize) -> Result<u64> {
    if s.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: s.len() });
    }
    s.chars().enumerate().try_fold(0u64, |acc, (j, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << j)),
        other => Err(Error::Parse(format!("unexpected character {other:?} in table {s:?}"))),
    })
}

/// A finite concept class.
#[derive(Debug, Clone, PartialEq)]
pub enum ConceptClass {
    Projections(ProjectionClass),
    Table(TableClass),
}

impl ConceptClass {
    pub fn projections(n: usize) -> Result<Self> {
        ProjectionClass::new(n).map(Self::Projections)
    }

    pub fn kind(&self) -> ClassKind {
        match self {
            Self::Projections(_) => ClassKind::Projection,
            Self::Table(_) => ClassKind::Table,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Projections(c) => c.len(),
            Self::Table(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Concept at 0-based position `k`.
    pub fn concept(&self, k: usize) -> ConceptId {
        ConceptId::from_index(self.kind(), k)
    }

    pub fn ids(&self) -> impl Iterator<Item = ConceptId> + '_ {
        let kind = self.kind();
        (0..self.len()).map(move |k| ConceptId::from_index(kind, k))
    }

    pub fn check(&self, id: ConceptId) -> Result<()> {
        match self {
            Self::Projections(c) => c.check(id),
            Self::Table(c) => c.check(id),
        }
    }

    /// Evaluates concept `id` at `x`.
    pub fn eval(&self, id: ConceptId, x: &Point) -> Result<bool> {
        self.check(id)?;
        match self {
            Self::Projections(c) => {
                x.check_dim(c.dimension())?;
                Ok(x.get(id.index))
            }
            Self::Table(c) => {
                let j = c.domain_index(x)?;
                Ok((c.mask(id.index) >> j) & 1 == 1)
            }
        }
    }
}

/// Evaluates a concept at a point; see [`ConceptClass::eval`].
pub fn eval_concept(class: &ConceptClass, id: ConceptId, x: &Point) -> Result<bool> {
    class.eval(id, x)
}

/// The all-functions class `{0,1}^X` over `domain`.
pub fn all_functions_class(domain: Vec<Point>) -> Result<TableClass> {
    TableClass::all_functions(domain)
}

/// JSON form of a concept class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassSpec {
    Projections { n: usize },
    Table { domain: Vec<Point>, tables: TablesSpec },
}

/// Explicit table strings, or `"all"` for the all-functions class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TablesSpec {
    Keyword(AllKeyword),
    List(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllKeyword {
    All,
}

impl ClassSpec {
    pub fn build(&self) -> Result<ConceptClass> {
        match self {
            Self::Projections { n } => ConceptClass::projections(*n),
            Self::Table { domain, tables: TablesSpec::Keyword(AllKeyword::All) } => {
                TableClass::all_functions(domain.clone()).map(ConceptClass::Table)
            }
            Self::Table { domain, tables: TablesSpec::List(list) } => {
                TableClass::from_strings(domain.clone(), list).map(ConceptClass::Table)
            }
        }
    }
}

impl From<&ConceptClass> for ClassSpec {
    fn from(class: &ConceptClass) -> Self {
        match class {
            ConceptClass::Projections(c) => Self::Projections { n: c.dimension() },
            ConceptClass::Table(t) => Self::Table {
                domain: t.domain().to_vec(),
                tables: if t.is_all_functions() {
                    TablesSpec::Keyword(AllKeyword::All)
                } else {
                    TablesSpec::List((0..t.len()).map(|k| t.table_string(k)).collect())
                },
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn projection_reads_coordinate() {
        let c4 = ConceptClass::projections(4).unwrap();
        let x = pt("0010");
        assert!(eval_concept(&c4, ConceptId::projection(3), &x).unwrap());
        assert!(!eval_concept(&c4, ConceptId::projection(1), &x).unwrap());
    }

    #[test]
    fn table_lookup_in_domain_order() {
        let (a, b) = (pt("0"), pt("1"));
        let class = ConceptClass::Table(TableClass::from_strings(vec![a.clone(), b.clone()], &["10"]).unwrap());
        assert!(eval_concept(&class, ConceptId::table(1), &a).unwrap());
        assert!(!eval_concept(&class, ConceptId::table(1), &b).unwrap());
    }

    #[test]
    fn eval_errors_are_distinct() {
        let c4 = ConceptClass::projections(4).unwrap();
        assert_eq!(
            c4.eval(ConceptId::projection(1), &pt("001")),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        );
        let table = ConceptClass::Table(TableClass::all_functions(vec![pt("00")]).unwrap());
        assert!(matches!(table.eval(ConceptId::table(1), &pt("11")), Err(Error::PointNotInDomain(_))));
        assert!(matches!(c4.eval(ConceptId::projection(5), &pt("0000")), Err(Error::ConceptOutOfRange { .. })));
        assert_eq!(c4.eval(ConceptId::table(1), &pt("0000")), Err(Error::ConceptKindMismatch));
    }

    #[test]
    fn all_functions_sizes() {
        let dom = |d: usize| (0..d as u64).map(|k| Point::from_index(3, k)).collect::<Vec<_>>();
        assert_eq!(all_functions_class(dom(2)).unwrap().len(), 4);
        assert_eq!(all_functions_class(dom(0)).unwrap().len(), 1);
        assert_eq!(all_functions_class(dom(3)).unwrap().len(), 8);
        let big: Vec<Point> = (0..21).map(|k| Point::from_index(5, k)).collect();
        assert_eq!(all_functions_class(big).unwrap_err(), Error::DomainTooLarge { size: 21, limit: 20 });
    }

    #[test]
    fn duplicate_domain_rejected() {
        assert!(TableClass::new(vec![pt("01"), pt("01")], vec![]).is_err());
        assert!(TableClass::new(vec![pt("01")], vec![0b10]).is_err());
    }

    #[test]
    fn class_spec_json() {
        let spec: ClassSpec = serde_json::from_str(r#"{"kind":"projections","n":8}"#).unwrap();
        assert_eq!(spec.build().unwrap().len(), 8);
        let spec: ClassSpec =
            serde_json::from_str(r#"{"kind":"table","domain":["00","01"],"tables":["10","11"]}"#).unwrap();
        let class = spec.build().unwrap();
        assert_eq!(class.len(), 2);
        assert_eq!(ClassSpec::from(&class), spec);
        let all: ClassSpec = serde_json::from_str(r#"{"kind":"table","domain":["0","1"],"tables":"all"}"#).unwrap();
        assert_eq!(all.build().unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn projection_is_bit_lookup(bits in proptest::collection::vec(any::<bool>(), 1..200), pick in any::<prop::sample::Index>()) {
            let n = bits.len();
            let class = ConceptClass::projections(n).unwrap();
            let x = Point::from_bits(&bits);
            let i = pick.index(n);
            prop_assert_eq!(class.eval(ConceptId::projection(i + 1), &x).unwrap(), bits[i]);
        }
    }
}
