pub mod acceptance;
pub mod bits;
pub mod channel;
pub mod combinatorics;
pub mod del_code;
pub mod deletion_codec;
pub mod deletion_index;
pub mod error;
pub mod gf;
pub mod hamming_index;
pub mod message;
pub mod oracle;
pub mod robust_index;
pub mod rs;
pub mod subst_code;
pub mod word;

pub use bits::BitString;
pub use channel::{ErrorOp, ErrorPattern, OpKind};
pub use del_code::{DelMode, DelParams};
pub use deletion_codec::DeletionCodec;
pub use error::{DecodeFailure, Result, SlicedError};
pub use message::Message;
pub use robust_index::{Codebook, Metric};
pub use subst_code::SubstParams;
pub use word::{IndicatorVector, Word};
