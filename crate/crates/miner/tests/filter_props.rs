use std::path::PathBuf;
use std::sync::Arc;

use chrono::{Duration, NaiveDate, TimeZone, Utc};
use proptest::prelude::*;
use smellscan_miner::{Backoff, Client, Interaction, ReplayTransport, RepoQuery};

fn page_items(repos: &[(u64, i64)]) -> serde_json::Value {
    let base = Utc.with_ymd_and_hms(2022, 1, 1, 0, 0, 0).unwrap();
    let items: Vec<_> = repos
        .iter()
        .enumerate()
        .map(|(i, &(stars, days))| {
            serde_json::json!({
                "full_name": format!("o{i}/r{i}"),
                "clone_url": format!("https://example.test/o{i}/r{i}.git"),
                "stargazers_count": stars,
                "pushed_at": (base + Duration::days(days)).to_rfc3339(),
                "default_branch": "main",
            })
        })
        .collect();
    serde_json::json!({ "total_count": repos.len(), "items": items })
}

proptest! {
    #[test]
    fn results_respect_filters_and_order(
        repos in prop::collection::vec((0u64..500, 0i64..900), 0..40),
        min_stars in 0u64..300,
        window_days in 0i64..900,
        max_results in 1usize..50,
    ) {
        let pushed_after = NaiveDate::from_ymd_opt(2022, 1, 1).unwrap() + Duration::days(window_days);
        let query = RepoQuery {
            keywords: vec!["dqn".into()],
            language: "Python".into(),
            min_stars,
            pushed_after,
            max_results,
        };
        let url = {
            let q = url::form_urlencoded::Serializer::new(String::new())
                .append_pair("q", &query.search_terms())
                .append_pair("sort", "stars")
                .append_pair("order", "desc")
                .append_pair("per_page", "100")
                .append_pair("page", "1")
                .finish();
            format!("/search/repositories?{q}")
        };
        let transport = ReplayTransport::new(PathBuf::new(), vec![Interaction {
            request: url,
            status: 200,
            headers: Default::default(),
            body: Some(page_items(&repos)),
            body_file: None,
        }]);
        let client = Client::new(Arc::new(transport), "https://api.test")
            .with_per_page(100)
            .with_backoff(Backoff::none());
        let found = client.search(&query).unwrap();
        let eligible = repos
            .iter()
            .filter(|&&(s, d)| s >= min_stars && NaiveDate::from_ymd_opt(2022, 1, 1).unwrap() + Duration::days(d) >= pushed_after)
            .count();
        prop_assert_eq!(found.len(), eligible.min(max_results));
        prop_assert!(found.iter().all(|r| query.accepts(r)));
        prop_assert!(found.windows(2).all(|w| w[0].stars >= w[1].stars));
    }
}
