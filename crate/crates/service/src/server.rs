//! Running the service until the process is signalled.

use std::net::SocketAddr;

use thiserror::Error;
use tokio::net::TcpListener;

use crate::api::{router, AppState};
use crate::auth::{TokenFileError, TokenTable};
use crate::config::Config;
use crate::store::{Store, StoreError};

#[derive(Debug, Error)]
pub enum ServeError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Tokens(#[from] TokenFileError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
    #[error("server error: {0}")]
    Io(#[from] std::io::Error),
}

/// Opens the store and token table named by `config`.
pub fn state_from_config(config: &Config) -> Result<AppState, ServeError> {
    let store = Store::open(&config.store_path)?;
    let tokens = TokenTable::load(&config.token_file)?;
    if tokens.is_empty() {
        tracing::warn!("token file {} lists no tokens; every request will be refused", config.token_file.display());
    }
    Ok(AppState::new(store, tokens, config.workers, config.default_time_limit()))
}

pub async fn serve(config: Config) -> Result<(), ServeError> {
    let state = state_from_config(&config)?;
    let listener = TcpListener::bind(config.listen)
        .await
        .map_err(|source| ServeError::Bind { addr: config.listen, source })?;
    tracing::info!(
        "listening on {} (store {}, {} workers)",
        listener.local_addr()?,
        config.store_path.display(),
        config.workers
    );
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await?;
    Ok(())
}
