//! Published figures for the recycling-platform study, transcribed as data.

use umlenrich::fixtures::{corpus, initial_model, rules_mapping};
use umlenrich::pipeline::{run_enrich, EnrichContext, UniformReviewer};
use umlenrich::session::{BackendSpec, Session};
use umlenrich::suggest::RulesBackend;

/// Validated method per use case, with ids as published (before aliasing).
pub const TRACE_PAIRS: [(&str, &str); 18] = [
    (
        "UC1",
        "registerUser(name: string, email: string, phoneNumber: string, address: string): boolean",
    ),
    ("UC2", "listProduct(productDetails: ProductDetails): boolean"),
    (
        "UC3",
        "processTransaction(transactionDetails: TransactionDetails): boolean",
    ),
    ("UC4", "processSale(saleDetails: SaleDetails): boolean"),
    ("UC5", "submitReview(reviewDetails: ReviewDetails): boolean"),
    (
        "UC7",
        "submitCollectionRequest(requestDetails: CollectionRequestDetails): boolean",
    ),
    (
        "UC8",
        "submitTransportRequest(requestDetails: TransportRequestDetails): boolean",
    ),
    ("UC11", "manageRewards(): string"),
    ("UC12", "trackWasteJourney(trackingCode: string): string"),
    (
        "UC13",
        "submitFeedbackOrReport(feedbackDetails: FeedbackDetails): boolean",
    ),
    ("UC14", "getServiceRequestDetails(requestID: string): string"),
    ("UC15", "login(username: string, password: string): boolean"),
    ("UC16", "updateProfile(profileDetails: ProfileDetails): boolean"),
    ("UC17", "manageTransactionsAndPayments(): void"),
    ("UC18", "connectWithTransportCompanies(): string"),
    ("UC19", "viewAndAnalyzeWasteManagementData(): string"),
    ("UC22", "monitorRecyclingAndWasteManagementPerformance(): string"),
    (
        "UC23",
        "manageShippingAndDeliveryDetails(transactionID: string, shippingDetails: ShippingDetails): boolean",
    ),
];

pub const METHODLESS: [&str; 10] = [
    "Product",
    "CollectionPoint",
    "RecyclingPoint",
    "EnvironmentalImpact",
    "InformationResource",
    "RewardSystem",
    "PaymentDetails",
    "ShippingDetails",
    "TransportCompany",
    "StateAdministration",
];

pub const METHODLESS_SUBCLASSES: [&str; 6] = ["IndividualUser", "CorporateUser", "Plastic", "Paper", "Metal", "Glass"];

pub const UNCOVERED: [&str; 3] = ["UC6", "UC9", "UC10"];

pub const METHODS_PER_CLASS: [(&str, usize); 6] = [
    ("User", 9),
    ("Transaction", 4),
    ("Review", 1),
    ("ServiceRequest", 3),
    ("PaymentGateway", 2),
    ("PlatformManager", 3),
];

/// (classes, methods, relationships) of the initial and enhanced diagrams.
pub const INITIAL_COUNTS: (usize, usize, usize) = (21, 0, 19);
pub const ENHANCED_COUNTS: (usize, usize, usize) = (22, 22, 21);

pub const ID_ALIASES: [(&str, &str); 2] = [("UC22", "UC20"), ("UC23", "UC21")];

pub fn canonical_id(id: &str) -> &str {
    ID_ALIASES.iter().find(|(a, _)| *a == id).map(|(_, c)| *c).unwrap_or(id)
}

/// Accept-all run of the shipped rules over the shipped corpus.
pub fn golden_session() -> Session {
    let c = corpus();
    let backend = RulesBackend::new(rules_mapping());
    let ctx = EnrichContext {
        corpus: &c,
        backend: &backend,
        session_path: None,
        limit: None,
    };
    let s = Session::new(
        "initial.puml".into(),
        "usecases".into(),
        BackendSpec::Rules {
            path: "rules.json".into(),
        },
        &initial_model(),
    );
    run_enrich(s, &ctx, &mut UniformReviewer { accept: true }).expect("golden run")
}
