use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Extended integer: arbitrary precision plus the `±∞` sentinels used as
/// identities of `min` and `max`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    NegInf,
    Fin(BigInt),
    PosInf,
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Fin(BigInt::from(v))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NegInf => write!(f, "-inf"),
            Value::PosInf => write!(f, "inf"),
            Value::Fin(v) => write!(f, "{}", v),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("undefined arithmetic: {0}")]
    Undefined(String),
    #[error("inexact division {0} / {1}")]
    Inexact(BigInt, BigInt),
}

/// Reduction operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReduceOp {
    Plus,
    Times,
    Min,
    Max,
}

impl ReduceOp {
    pub fn identity(self) -> Value {
        match self {
            ReduceOp::Plus => Value::Fin(BigInt::zero()),
            ReduceOp::Times => Value::Fin(BigInt::one()),
            ReduceOp::Min => Value::PosInf,
            ReduceOp::Max => Value::NegInf,
        }
    }

    /// `times` only has an inverse when operands are promised nonzero.
    pub fn has_inverse(self, assume_nonzero: bool) -> bool {
        match self {
            ReduceOp::Plus => true,
            ReduceOp::Times => assume_nonzero,
            ReduceOp::Min | ReduceOp::Max => false,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReduceOp::Plus => "plus",
            ReduceOp::Times => "times",
            ReduceOp::Min => "min",
            ReduceOp::Max => "max",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ReduceOp::Plus => "+",
            ReduceOp::Times => "*",
            ReduceOp::Min => "min",
            ReduceOp::Max => "max",
        }
    }

    pub fn combine_op(self) -> BinOp {
        match self {
            ReduceOp::Plus => BinOp::Add,
            ReduceOp::Times => BinOp::Mul,
            ReduceOp::Min => BinOp::Min,
            ReduceOp::Max => BinOp::Max,
        }
    }

    pub fn inverse_op(self) -> Option<BinOp> {
        match self {
            ReduceOp::Plus => Some(BinOp::Sub),
            ReduceOp::Times => Some(BinOp::Div),
            _ => None,
        }
    }

    pub fn apply(self, a: &Value, b: &Value) -> Result<Value, ArithError> {
        self.combine_op().apply(a, b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
}

impl BinOp {
    pub fn apply(self, a: &Value, b: &Value) -> Result<Value, ArithError> {
        use Value::*;
        let undefined = || ArithError::Undefined(format!("{:?}({}, {})", self, a, b));
        Ok(match self {
            BinOp::Min => a.clone().min(b.clone()),
            BinOp::Max => a.clone().max(b.clone()),
            BinOp::Add => match (a, b) {
                (Fin(x), Fin(y)) => Fin(x + y),
                (PosInf, NegInf) | (NegInf, PosInf) => return Err(undefined()),
                (PosInf, _) | (_, PosInf) => PosInf,
                _ => NegInf,
            },
            BinOp::Sub => match (a, b) {
                (Fin(x), Fin(y)) => Fin(x - y),
                _ => return Err(undefined()),
            },
            BinOp::Mul => match (a, b) {
                (Fin(x), Fin(y)) => Fin(x * y),
                _ => return Err(undefined()),
            },
            BinOp::Div => match (a, b) {
                (Fin(x), Fin(y)) => {
                    if y.is_zero() {
                        return Err(undefined());
                    }
                    let (q, r) = x.div_rem(y);
                    if !r.is_zero() {
                        return Err(ArithError::Inexact(x.clone(), y.clone()));
                    }
                    Fin(q)
                }
                _ => return Err(undefined()),
            },
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Min => "min",
            BinOp::Max => "max",
        }
    }

    /// Infix operators print as `a op b`; min/max print as calls.
    pub fn is_infix(self) -> bool {
        !matches!(self, BinOp::Min | BinOp::Max)
    }
}

/// Scalar function symbols available to bodies (`f` in `f(reduce(...))`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncKind {
    Inc,
    Double,
    SquareMod97,
    Identity,
}

impl FuncKind {
    pub const ALL: [FuncKind; 4] = [FuncKind::Inc, FuncKind::Double, FuncKind::SquareMod97, FuncKind::Identity];

    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Inc => "inc",
            FuncKind::Double => "double",
            FuncKind::SquareMod97 => "sqmod97",
            FuncKind::Identity => "id",
        }
    }

    pub fn parse(s: &str) -> Option<FuncKind> {
        FuncKind::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn apply(self, v: &Value) -> Result<Value, ArithError> {
        let Value::Fin(x) = v else {
            return Err(ArithError::Undefined(format!("{}({})", self.name(), v)));
        };
        Ok(Value::Fin(match self {
            FuncKind::Inc => x + 1,
            FuncKind::Double => x * 2,
            FuncKind::SquareMod97 => (x * x).mod_floor(&BigInt::from(97)),
            FuncKind::Identity => x.clone(),
        }))
    }
}

impl Value {
    pub fn is_negative_fin(&self) -> bool {
        matches!(self, Value::Fin(v) if v.is_negative())
    }
}
