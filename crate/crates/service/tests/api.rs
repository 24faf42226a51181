use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use pairrank::{rate, Algorithm, AlgorithmParams, ComparisonRecord, Winner};
use pairrank_service::{router, Config};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(config: Config, request: Request<Body>) -> (StatusCode, Value) {
    let response = router(config).oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let body = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, body)
}

fn post(body: impl Into<Body>) -> Request<Body> {
    Request::post("/v1/rank")
        .header("content-type", "application/json")
        .body(body.into())
        .unwrap()
}

async fn rank(body: Value) -> (StatusCode, Value) {
    call(Config::default(), post(body.to_string())).await
}

fn listing() -> Value {
    json!([
        {"left": "pizza", "right": "burger", "winner": "left"},
        {"left": "burger", "right": "sushi", "winner": "right"},
        {"left": "pizza", "right": "sushi", "winner": "tie"}
    ])
}

fn score(body: &Value, item: &str) -> f64 {
    body["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["item"] == item)
        .unwrap()["score"]
        .as_f64()
        .unwrap()
}

#[tokio::test]
async fn elo_listing() {
    let (status, body) = rank(json!({"records": listing(), "algorithm": "elo"})).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert!((score(&body, "pizza") - 1014.972058).abs() < 1e-6);
    assert!((score(&body, "burger") - 970.647200).abs() < 1e-6);
    assert!((score(&body, "sushi") - 1014.380742).abs() < 1e-6);
    assert_eq!(body["items"][0]["item"], "pizza");
    assert_eq!(body["items"][0]["rank"], 1);
    assert_eq!(body["meta"]["algorithm"], "elo");
    assert_eq!(body["pairwise"]["order"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn scores_match_the_library_exactly() {
    let records = vec![
        ComparisonRecord::new("pizza", "burger", Winner::Left),
        ComparisonRecord::new("burger", "sushi", Winner::Right),
        ComparisonRecord::new("pizza", "sushi", Winner::Draw),
    ];
    for algorithm in Algorithm::ALL {
        let expected = rate(&records, None, algorithm, &AlgorithmParams::default()).unwrap();
        let (status, body) =
            rank(json!({"records": listing(), "algorithm": algorithm.to_string()})).await;
        assert_eq!(status, StatusCode::OK, "{algorithm}: {body}");
        for (item, value) in &expected.scores {
            assert_eq!(score(&body, item).to_bits(), value.to_bits(), "{algorithm} {item}");
        }
    }
}

#[tokio::test]
async fn identical_requests_give_identical_responses() {
    let request = json!({"records": listing(), "algorithm": "bradley-terry", "bootstrap_rounds": 50});
    let (_, first) = rank(request.clone()).await;
    let (_, second) = rank(request).await;
    assert_eq!(first, second);
    let item = &first["items"][0];
    assert!(item["lower"].as_f64().unwrap() <= item["upper"].as_f64().unwrap());
}

#[tokio::test]
async fn empty_records_are_fine() {
    let (status, body) = rank(json!({"records": [], "algorithm": "newman"})).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["items"], json!([]));
}

#[tokio::test]
async fn non_positive_scores_omit_the_pairwise_matrix() {
    let (status, body) = rank(json!({"records": listing(), "algorithm": "counting"})).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.get("pairwise").is_none());
    assert_eq!(body["pairwise_omitted"]["reason"], "non_positive_score");
}

#[tokio::test]
async fn unknown_algorithm_is_unprocessable() {
    let (status, body) = rank(json!({"records": listing(), "algorithm": "glicko"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("glicko"));
}

#[tokio::test]
async fn invalid_parameter_is_unprocessable() {
    let (status, body) =
        rank(json!({"records": listing(), "algorithm": "elo", "params": {"k": -1.0}})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{body}");
    assert_eq!(body["details"][0]["field"], "params.k");
}

#[tokio::test]
async fn schema_errors_name_the_field() {
    let records = json!([
        {"left": "a", "right": "b", "winner": "left"},
        {"left": "a", "right": "b", "winner": "left"},
        {"left": "a", "right": "b", "winner": "left"},
        {"left": "a", "right": 7, "winner": "sideways", "weight": -2}
    ]);
    let (status, body) = rank(json!({"records": records, "algorithm": "elo"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let fields: Vec<&str> = body["details"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["field"].as_str().unwrap())
        .collect();
    assert_eq!(fields, ["records[3].right", "records[3].winner", "records[3].weight"]);

    let (status, body) = rank(json!({"algorithm": "elo"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["details"][0]["field"], "records");

    let (status, body) = rank(json!({"records": [], "algorithm": "elo", "extra": 1})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["details"][0]["field"], "extra");

    let (status, _) = call(Config::default(), post("{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn oversized_requests_are_rejected() {
    let small = Config {
        max_body_bytes: 64,
        ..Config::default()
    };
    let body = json!({"records": listing(), "algorithm": "elo"}).to_string();
    let (status, body) = call(small, post(body)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert!(body["error"].is_string());

    let few = Config {
        max_records: 2,
        ..Config::default()
    };
    let body = json!({"records": listing(), "algorithm": "elo"}).to_string();
    let (status, _) = call(few, post(body)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn lists_algorithms() {
    let request = Request::get("/v1/algorithms").body(Body::empty()).unwrap();
    let (status, body) = call(Config::default(), request).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = body.as_array().unwrap().iter().map(|a| a["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 7);
    assert!(names.contains(&"pagerank"));
}

#[tokio::test]
async fn serves_static_files() {
    let dir = std::env::temp_dir().join(format!("pairrank-static-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("index.html"), "<html>ui</html>").unwrap();
    let config = Config {
        static_dir: Some(dir.clone()),
        ..Config::default()
    };
    let response = router(config)
        .oneshot(Request::get("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(response.status(), StatusCode::OK);
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&bytes[..], b"<html>ui</html>");
    std::fs::remove_dir_all(dir).ok();
}
