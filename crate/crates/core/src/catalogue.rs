//! Paradox families and the outcome groups that make up each constraint table.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::DavnError;
use crate::pauli::BasisKet;

/// One constraint table. Tables I and II cover types I and II; tables III–X
/// cover the A/B subfamilies of types III–VI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    II,
    IIIA,
    IIIB,
    IVA,
    IVB,
    VA,
    VB,
    VIA,
    VIB,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::I,
        Family::II,
        Family::IIIA,
        Family::IIIB,
        Family::IVA,
        Family::IVB,
        Family::VA,
        Family::VB,
        Family::VIA,
        Family::VIB,
    ];

    fn index(self) -> usize {
        Self::ALL.iter().position(|&f| f == self).unwrap()
    }

    /// Table numeral `I`..`X`, also used in fixture files.
    pub fn table_numeral(self) -> &'static str {
        ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"][self.index()]
    }

    /// Family label, e.g. `III-A`.
    pub fn label(self) -> &'static str {
        ["I", "II", "III-A", "III-B", "IV-A", "IV-B", "V-A", "V-B", "VI-A", "VI-B"][self.index()]
    }

    /// Paradox type without the subfamily, `I`..`VI`.
    pub fn paradox_type(self) -> &'static str {
        ["I", "II", "III", "III", "IV", "IV", "V", "V", "VI", "VI"][self.index()]
    }

    /// Outcome groups printed in this family's table, in table order.
    /// Type I's table is written for `α = 1` only.
    pub fn table_outcomes(self) -> Vec<BasisKet> {
        let digits: &[&str] = match self {
            Family::I => &["0000"],
            Family::II => &["0022", "2002", "2200", "0220", "0202", "2020"],
            Family::IIIA => &["0233", "3023", "3302", "2330", "0323", "3032"],
            Family::IIIB => &["2033", "3203", "3320", "0332", "2303", "3230"],
            Family::IVA => &["0211", "1021", "1102", "2110", "0121", "1012"],
            Family::IVB => &["2011", "1201", "1120", "0112", "2101", "1210"],
            Family::VA => &["1300", "0130", "0013", "3001", "1030", "0103"],
            Family::VB => &["3100", "0310", "0031", "1003", "3010", "0301"],
            Family::VIA => &["1322", "2132", "2213", "3221", "1232", "2123"],
            Family::VIB => &["3122", "2312", "2231", "1223", "3212", "2321"],
        };
        digits.iter().map(|d| BasisKet::parse(d).expect("catalogue digits")).collect()
    }

    /// Every outcome belonging to the family.
    pub fn outcomes(self) -> Vec<BasisKet> {
        let mut out = self.table_outcomes();
        if self == Family::I {
            out.push(BasisKet::new([2, 2, 2, 2]));
        }
        out
    }

    /// Sorted digit multiset shared by the family's outcomes.
    pub fn digit_multiset(self) -> [u8; 4] {
        match self {
            Family::I => [0, 0, 0, 0],
            Family::II => [0, 0, 2, 2],
            Family::IIIA | Family::IIIB => [0, 2, 3, 3],
            Family::IVA | Family::IVB => [0, 1, 1, 2],
            Family::VA | Family::VB => [0, 0, 1, 3],
            Family::VIA | Family::VIB => [1, 2, 2, 3],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Accepts table numerals (`I`..`X`) and family labels (`III-A`, ...).
impl FromStr for Family {
    type Err = DavnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase();
        Family::ALL
            .into_iter()
            .find(|f| f.table_numeral() == key || f.label() == key)
            .ok_or_else(|| DavnError::parse(None, format!("unknown table label {s:?}")))
    }
}
