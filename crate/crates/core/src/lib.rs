//! Product codes built from binary images of double-parity Reed-Solomon codes
//! (rows) and binary LDPC codes (columns), with row/column error detection,
//! permutation decoding of the RS images and a Monte-Carlo BER harness.

pub mod channel;
pub mod error;
pub mod gf;
pub mod ldpc;
pub mod permdec;
pub mod product;
pub mod rscode;
pub mod sim;

pub use error::{Error, Result};
pub use gf::{Field, GfElement};
pub use ldpc::LdpcCode;
pub use product::{PdaOutput, PdaParams, PdaStatus, ProductArray, ProductCode, SoftArray};
pub use rscode::{BinaryImage, BinaryParityMatrix, DecodeFailure, RsCode};
