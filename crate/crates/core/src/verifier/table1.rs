//! The exception list for order-3 elements: socle families and element
//! kinds for which every pair of conjugates may generate a solvable group.

use serde::{Deserialize, Serialize};

use crate::atlas::{ElementKind, Family, GroupSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionRow {
    pub socle: &'static str,
    pub element: &'static str,
    /// Whether any group in the atlas realizes this row.
    pub supported: bool,
}

pub const EXCEPTION_ROWS: &[ExceptionRow] = &[
    ExceptionRow {
        socle: "PSL(n,3), n>2",
        element: "transvection",
        supported: true,
    },
    ExceptionRow {
        socle: "PSp(2n,3), n>1",
        element: "transvection",
        supported: true,
    },
    ExceptionRow {
        socle: "PSU(n,3), n>2",
        element: "transvection",
        supported: true,
    },
    ExceptionRow {
        socle: "PSU(n,2), n>3",
        element: "reflection of order 3",
        supported: true,
    },
    ExceptionRow {
        socle: "POmega(n,3), n>6",
        element: "long root element",
        supported: true,
    },
    ExceptionRow {
        socle: "E6(3), E7(3), E8(3), F4(3), 2E6(3), 3D4(3)",
        element: "long root element",
        supported: false,
    },
    ExceptionRow {
        socle: "G2(3)",
        element: "long or short root element",
        supported: false,
    },
    ExceptionRow {
        socle: "G2(2)' = PSU(3,3)",
        element: "transvection",
        supported: true,
    },
];

/// A matched row, with the socle the group was identified with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionMatch {
    pub row: usize,
    pub socle: String,
    pub element: String,
}

fn hit(row: usize, socle: String) -> Option<ExceptionMatch> {
    Some(ExceptionMatch {
        row,
        socle,
        element: EXCEPTION_ROWS[row].element.to_string(),
    })
}

/// Matches `(family, n, q, kind)` against the exception rows. Only classical
/// specs can match; `Omega±(6,3)` long root elements are matched through
/// `POmega+(6,3) = PSL(4,3)` and `POmega-(6,3) = PSU(4,3)`.
pub fn match_exception(spec: &GroupSpec, kind: ElementKind) -> Option<ExceptionMatch> {
    let GroupSpec::Classical { family, n, q } = spec else {
        return None;
    };
    let (n, q) = (*n, *q);
    match (family.linear(), kind) {
        (Family::SL | Family::GL, ElementKind::Transvection) if q == 3 && n > 2 => hit(0, format!("PSL({n},3)")),
        (Family::Sp, ElementKind::Transvection) if q == 3 && n >= 4 => hit(1, format!("PSp({n},3)")),
        (Family::SU | Family::GU, ElementKind::Transvection) if q == 3 && n > 2 => hit(2, format!("PSU({n},3)")),
        (Family::SU | Family::GU, ElementKind::Reflection) if q == 2 && n > 3 => hit(3, format!("PSU({n},2)")),
        (Family::OmegaPlus | Family::OmegaMinus, ElementKind::LongRoot) if q == 3 => {
            let sign = if family.linear() == Family::OmegaPlus { '+' } else { '-' };
            match n {
                6 if sign == '+' => hit(0, "PSL(4,3)".into()),
                6 => hit(2, "PSU(4,3)".into()),
                n if n > 6 => hit(4, format!("POmega{sign}({n},3)")),
                _ => None,
            }
        }
        _ => None,
    }
}
