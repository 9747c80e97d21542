pub mod oracle;
pub mod synth;
