use std::fmt;

/// The eight 4-tuples over {0,1} with even sum, in lexicographic order.
pub const L: [[u8; 4]; 8] = [
    [0, 0, 0, 0],
    [0, 0, 1, 1],
    [0, 1, 0, 1],
    [0, 1, 1, 0],
    [1, 0, 0, 1],
    [1, 0, 1, 0],
    [1, 1, 0, 0],
    [1, 1, 1, 1],
];

pub const L_INDICES: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

/// Complement a' = 1 - a.
#[inline]
pub const fn c(a: u8) -> u8 {
    1 - a
}

/// Position of a tuple in `L`, if it has even sum.
pub fn l_pos(t: [u8; 4]) -> Option<usize> {
    L.iter().position(|&u| u == t)
}

pub fn l_complement(k: usize) -> usize {
    let t = L[k];
    l_pos([c(t[0]), c(t[1]), c(t[2]), c(t[3])]).unwrap()
}

pub fn l_name(k: usize) -> String {
    L[k].iter().map(|d| char::from(b'0' + d)).collect()
}

const XY_NAMES: [&str; 16] = [
    "x00", "x01", "x10", "x11", "x20", "x21", "x30", "x31", "y0000", "y0011", "y0101", "y0110",
    "y1001", "y1010", "y1100", "y1111",
];

const T4_NAMES: [&str; 8] = ["t00", "t01", "t10", "t11", "t20", "t21", "t30", "t31"];

/// A named auxiliary variable set (all weights 1).
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    pub name: &'static str,
    pub vars: &'static [&'static str],
}

pub static S4: VarSet = VarSet { name: "S4", vars: &["s0", "s1", "s2", "s3"] };
pub static LAM_S: VarSet = VarSet { name: "LamS", vars: &["lam", "s0", "s1", "s2", "s3"] };
pub static LAM_U: VarSet = VarSet { name: "LamU", vars: &["lam", "u0", "u1", "u2"] };
pub static CHART3: VarSet = VarSet { name: "Chart3", vars: &["x1", "x2", "x3"] };
pub static CHART_W: VarSet = VarSet { name: "ChartW", vars: &["x00", "x21", "x31"] };
pub static LOCAL4: VarSet = VarSet { name: "Local4", vars: &["u0", "u1", "u2", "u3"] };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// x_ia (weight 1) then y_abcd (weight 2).
    XY,
    /// t_ia with multidegree e_i.
    T4,
    Free(&'static VarSet),
}

impl Ambient {
    pub fn nvars(&self) -> usize {
        match self {
            Ambient::XY => 16,
            Ambient::T4 => 8,
            Ambient::Free(v) => v.vars.len(),
        }
    }

    pub fn var_name(&self, i: usize) -> &'static str {
        match self {
            Ambient::XY => XY_NAMES[i],
            Ambient::T4 => T4_NAMES[i],
            Ambient::Free(v) => v.vars[i],
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.var_name(i) == name)
    }

    pub fn weight(&self, i: usize) -> i64 {
        match self {
            Ambient::XY if i >= 8 => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::XY => write!(f, "XY"),
            Ambient::T4 => write!(f, "T4"),
            Ambient::Free(v) => write!(f, "{}", v.name),
        }
    }
}

/// Variable indices in the XY ambient.
pub mod xy {
    use super::L;

    #[inline]
    pub const fn x(i: usize, a: u8) -> usize {
        2 * i + a as usize
    }

    #[inline]
    pub const fn y(k: usize) -> usize {
        8 + k
    }

    /// y-variable for a tuple (must have even sum).
    pub fn y_of(t: [u8; 4]) -> usize {
        8 + super::l_pos(t).expect("odd tuple has no y variable")
    }

    pub fn is_x(v: usize) -> bool {
        v < 8
    }

    pub fn tuple(v: usize) -> [u8; 4] {
        L[v - 8]
    }
}

/// Variable indices in the T4 ambient.
pub mod t4 {
    #[inline]
    pub const fn t(i: usize, a: u8) -> usize {
        2 * i + a as usize
    }
}
