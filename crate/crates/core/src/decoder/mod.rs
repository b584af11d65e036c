//! Soft decoding of analog fountain codes.

mod bp;
mod ml;
mod precoded;

pub use bp::{
    bp_decode, check_to_var_messages, BpDecoder, BpOutcome, CheckKernel, DecoderConfig, LlrVector,
    LLR_CLAMP, MAX_ENUM_DEGREE,
};
pub use ml::{ml_decode_bruteforce, MAX_ML_VARIABLES};
pub use precoded::{decode_with_precode, PrecodeContext, PrecodedOutcome};
