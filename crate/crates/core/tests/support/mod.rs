pub mod dd;
pub mod oracle;
