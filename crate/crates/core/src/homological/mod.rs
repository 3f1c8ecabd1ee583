//! Short exact sequences, `Ext^1`, hom-dimension defects, pushouts and
//! cancellation of direct summands.

mod cancel;
mod ext;
mod pushout;
mod ses;

pub use cancel::cancel_summand;
pub use ext::{
    ext1_basis, ext1_dim, ext_from_ses, ext_from_ses_with, ext_pushforward, pushforward_into, ses_from_ext, ExtClass,
    ExtSpace,
};
pub use pushout::{pushout, Pushout};
pub use ses::{default_probes, delta, delta_prime, delta_profile, is_split, make_ses, ShortExactSeq};
