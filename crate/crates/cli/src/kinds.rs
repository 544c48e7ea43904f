//! Named choices accepted by flags and config files.

use std::fmt;
use std::str::FromStr;

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => [$canon:literal $(, $alias:literal)*]),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name {
            $($variant),+
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
                    $($canon $(| $alias)* => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown value {other:?}; expected one of {}",
                        [$($canon),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self {
                    $($name::$variant => $canon),+
                })
            }
        }
    };
}

named_enum!(
    /// Simulated process.
    ProcessKind {
        Wsfbm => ["wsfbm", "base"],
        Ou => ["ou", "ornstein-uhlenbeck"],
        Geometric => ["geometric", "gbm"],
    }
);

named_enum!(
    /// Kernel evaluated by `kernel2d`.
    Kernel2dKind {
        Matern => ["matern"],
        DoubleExp => ["double-exp", "gaussian"],
        RationalQuadratic => ["rational-quadratic", "rq"],
        Periodic => ["periodic"],
        CAf => ["c-af", "caf"],
        KHaf => ["k-haf", "khaf"],
    }
);

named_enum!(
    /// Sign of the shell kernel.
    SignArg {
        Minus => ["minus", "-"],
        Plus => ["plus", "+"],
    }
);

named_enum!(
    /// Radial weight ‖u‖^a or e^{a‖u‖}.
    WeightKind {
        Power => ["power"],
        Exp => ["exp", "exponential"],
    }
);
