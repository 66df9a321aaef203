//! Command implementations, the result cache and reproduction tables.

mod cache;
mod commands;
mod table;

pub use cache::{Cache, CacheEntry, CacheKey, CACHE_DIR_ENV};
pub use commands::{
    cmd_check_certificate, cmd_invariant, cmd_table, cmd_verify, CommandOutput, Flags, Format,
    EXIT_FAILED, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE,
};
pub use table::{c0_table, cached_c0, expand_family, table_csv, RowStatus, TableRow};
