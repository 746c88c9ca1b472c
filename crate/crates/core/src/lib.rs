//! Entropy measures over Dempster-Shafer mass functions.
//!
//! * [`frame`]: frames of discernment, bitmask focal elements, validated BPAs
//!   and their JSON form.
//! * [`measures`]: Shannon, Deng, fractal-based (FB) and k-order
//!   time-fractal-based (TFB) entropy.
//! * [`split`]: explicit split trees, the leaf-count identity and the
//!   iterated Deng information volume.
//! * [`volume`]: the maximum k-order TFB entropy and its maximizing BPA.
//! * [`oracle`]: grid sweeps, seeded random BPAs and cross-checks.
//! * [`cli`]: the `tfb` command-line driver.
//!
//! ```
//! use tfb_core::{frame::MassFunction, measures::tfb_entropy, volume::hoivmf_value};
//!
//! let m = MassFunction::from_json(r#"{"frame":["A","B"],"masses":{"A":0.2,"B":0.2,"A,B":0.6}}"#)?;
//! assert!((tfb_entropy(&m, 1)? - hoivmf_value(2, 1)).abs() < 1e-12);
//! # Ok::<(), tfb_core::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod frame;
pub mod measures;
mod numeric;
pub mod oracle;
pub mod split;
pub mod volume;

pub use error::{Error, Result};
pub use frame::{FocalElement, Frame, MassFunction};
pub use numeric::{log2_pow_gap, pow_gap};
