#include "nlsearch/schema.hpp"

namespace nlsearch {

const std::vector<std::string>& builtin_bank(std::string_view name) {
    static const std::vector<std::string> us_states = {
        "Alabama", "Alaska", "Arizona", "Arkansas", "California", "Colorado", "Connecticut",
        "Delaware", "Florida", "Georgia", "Hawaii", "Idaho", "Illinois", "Indiana", "Iowa",
        "Kansas", "Kentucky", "Louisiana", "Maine", "Maryland", "Massachusetts", "Michigan",
        "Minnesota", "Mississippi", "Missouri", "Montana", "Nebraska", "Nevada", "New Hampshire",
        "New Jersey", "New Mexico", "New York", "North Carolina", "North Dakota", "Ohio",
        "Oklahoma", "Oregon", "Pennsylvania", "Rhode Island", "South Carolina", "South Dakota",
        "Tennessee", "Texas", "Utah", "Vermont", "Virginia", "Washington", "West Virginia",
        "Wisconsin", "Wyoming", "United States"};
    static const std::vector<std::string> ca_provinces = {
        "Alberta", "British Columbia", "Manitoba", "New Brunswick", "Newfoundland and Labrador",
        "Nova Scotia", "Ontario", "Prince Edward Island", "Quebec", "Saskatchewan",
        "Northwest Territories", "Nunavut", "Yukon", "Canada"};
    // Illustrative metro list; deployments are expected to replace it with
    // the product's full metro taxonomy (see docs/schema_config.md).
    static const std::vector<std::string> us_ca_metros = {
        "New York Metro", "San Francisco Bay Area", "Los Angeles Metro", "Chicago Metro",
        "Boston Metro", "Seattle Metro", "Atlanta Metro", "Dallas-Fort Worth Metro",
        "Houston Metro", "Washington DC Metro", "Denver Metro", "Phoenix Metro",
        "Toronto Metro", "Vancouver Metro", "Montreal Metro"};
    static const std::vector<std::string> empty;
    if (name == "us_states") return us_states;
    if (name == "ca_provinces") return ca_provinces;
    if (name == "us_ca_metros") return us_ca_metros;
    return empty;
}

SchemaRegistry default_schema() {
    std::vector<FieldSpec> fields;

    auto add = [&fields](FieldSpec spec) { fields.push_back(std::move(spec)); };

    {
        FieldSpec f;
        f.name = "company_keywords";
        f.kind = FieldKind::FreeText;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for companies with these specialties, products, services, or industries in "
            "which they operate, etc. For example, \"car manufacturer\", \"microwave ovens\", "
            "\"crm software\", \"cloud security\", \"pharmaceuticals\", \"hospital\", "
            "\"software\", and similar descriptive phrases.";
        f.guidelines = {
            "Use this for what a company does or sells, never for the company's own name.",
            "Keep each keyword short and generic; split distinct concepts into separate list "
            "entries instead of joining them into one long phrase.",
            "Do not place job titles, locations, or technologies here; those have dedicated "
            "fields."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "company_name";
        f.kind = FieldKind::FreeText;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for companies by their exact names, for example [\"Zoominfo\", \"Chorus\"]. "
            "Use this only when the query names one or more specific companies.";
        f.guidelines = {
            "Always output a list of strings, even when only one company is mentioned.",
            "Preserve the company name as written by the user; do not expand abbreviations or "
            "guess legal suffixes such as Inc or LLC.",
            "If the query describes a kind of company rather than naming one, use "
            "company_keywords instead."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "location";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringListMap;
        f.description =
            "Filter for the geographic location of the company or contact. The value is a "
            "dictionary of string lists keyed by region type: \"us_states\" for US states, "
            "\"ca_provinces\" for Canadian provinces and territories, \"us_ca_metros\" for US "
            "and Canadian metropolitan areas, and \"others\" for any other location such as a "
            "city, country, or region outside the US and Canada.";
        f.guidelines = {
            "Whole-country searches for the United States go under us_states as \"United "
            "States\"; whole-country searches for Canada go under ca_provinces as \"Canada\".",
            "Resolve informal region names to their member states; for example \"the "
            "northeast\" expands to the nine northeastern US states.",
            "Cities that are not recognized metro areas belong under others."};
        f.sub_keys = {"us_states", "ca_provinces", "us_ca_metros", "others"};
        f.sub_banks["us_states"] = builtin_bank("us_states");
        f.sub_banks["ca_provinces"] = builtin_bank("ca_provinces");
        f.sub_banks["us_ca_metros"] = builtin_bank("us_ca_metros");
        f.sub_banks["others"] = {};
        f.sub_bank_refs["us_states"] = "@us_states";
        f.sub_bank_refs["ca_provinces"] = "@ca_provinces";
        f.sub_bank_refs["us_ca_metros"] = "@us_ca_metros";
        add(f);
    }
    {
        FieldSpec f;
        f.name = "revenue_bounds";
        f.kind = FieldKind::Integer;
        f.shape = InputShape::ScalarInteger;
        f.description =
            "Filter for companies by annual revenue in US dollars, expressed as the pair of "
            "integer keys revenue_min and revenue_max. For example a revenue floor of half a "
            "million dollars is revenue_min 500000.";
        f.guidelines = {
            "Expand abbreviated amounts: \"5M\" or \"5 million\" becomes 5000000.",
            "\"at least\" / \"more than\" sets only revenue_min; \"under\" / \"less than\" sets "
            "only revenue_max; \"between X and Y\" sets both.",
            "Values must be plain non-negative integers with no currency symbols, commas, or "
            "units."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "employee_bounds";
        f.kind = FieldKind::Integer;
        f.shape = InputShape::ScalarInteger;
        f.description =
            "Filter for companies by headcount, expressed as the pair of integer keys "
            "employee_min and employee_max. For example at least 5000 employees is "
            "employee_min 5000.";
        f.guidelines = {
            "The same bound phrasing rules as revenue apply: one-sided phrases set a single "
            "bound, ranges set both.",
            "Employee counts are whole numbers of people; never output fractions or ranges as "
            "strings."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "technologies";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for companies that use these technology products or platforms, for example "
            "[\"Salesforce\", \"Snowflake\"].";
        f.guidelines = {
            "Must be zero or more of the listed choices; do not invent technology names outside "
            "the list.",
            "A technology a company uses is different from what it sells; products a company "
            "sells belong in company_keywords."};
        f.word_bank = {"Salesforce",      "Snowflake", "AWS",        "Microsoft Azure",
                       "Google Cloud",    "Oracle",    "SAP",        "HubSpot",
                       "Marketo",         "Shopify",   "Stripe",     "Zendesk",
                       "Slack",           "Workday",   "ServiceNow", "Tableau",
                       "Databricks",      "MongoDB",   "Kubernetes", "Docker"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "company_attributes";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for descriptive attributes of the company's business model or profile, for "
            "example [\"B2B\", \"SaaS\"].";
        f.guidelines = {
            "Must be zero or more of the listed choices.",
            "Attributes describe how the company operates, not what industry it is in; industry "
            "terms belong in company_keywords."};
        f.word_bank = {"B2B",          "B2C",          "SaaS",         "E-Commerce",
                       "Startup",      "Enterprise",   "Small Business", "Mid-Market",
                       "Franchise",    "Family Owned", "Minority Owned", "Women Owned",
                       "Veteran Owned", "Remote First", "Publicly Traded", "Venture Backed",
                       "Fortune 500"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "company_type";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for the ownership or organizational type of the company, for example "
            "[\"Public\", \"Non-profit\"].";
        f.guidelines = {"Must be zero or more of the listed choices."};
        f.word_bank = {"Public", "Private", "Non-profit", "Government", "Education"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "company_news";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for companies with recent news signals of these types, for example "
            "[\"Event\", \"Award\"]. Use this when the query asks about something that recently "
            "happened at the company.";
        f.guidelines = {
            "Must be zero or more of the listed choices.",
            "\"recently funded\" maps to Funding; \"recently acquired\" maps to Acquisition."};
        f.word_bank = {"Event",   "Award",  "Funding",          "Acquisition",
                       "Merger",  "IPO",    "Leadership Change", "Product Launch",
                       "Partnership", "Expansion", "Layoffs",  "Earnings"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "management_levels";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for contacts that are people managers or individual contributors "
            "(Non-Managers), and their level of management responsibility (not technical "
            "level).";
        f.guidelines = {
            "Must be zero or more of these options. Leave this empty if \"titles\" is not "
            "empty. Do not guess the level based on specific requested titles.",
            "Phrases like \"executives\" or \"decision makers\" refer to C-Level and VP-Level.",
            "management_levels and departments may be used together; management_levels and "
            "titles may not."};
        f.word_bank = {"C-Level", "VP-Level", "Director", "Manager", "Non-Manager"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "departments";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for contacts by the business department they work in, for example "
            "[\"Sales\", \"Legal\"].";
        f.guidelines = {
            "Must be zero or more of the listed choices. Leave this empty if \"titles\" is not "
            "empty; a specific title already implies the department.",
            "departments and management_levels are compatible and often appear together, for "
            "example directors in marketing."};
        f.word_bank = {"Sales",          "Legal",       "Marketing",   "Engineering",
                       "Finance",        "Human Resources", "Information Technology",
                       "Operations",     "Customer Success", "Product Management",
                       "Research and Development", "Supply Chain", "Communications",
                       "Medical and Health"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "person_name";
        f.kind = FieldKind::FreeText;
        f.shape = InputShape::ScalarString;
        f.description =
            "Filter for a contact by their full name, for example \"Ali Dasdan\". This is a "
            "single string, never a list.";
        f.guidelines = {
            "Only use this when the query names a specific person.",
            "Keep the name exactly as the user wrote it, including middle names or initials."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "titles";
        f.kind = FieldKind::FreeText;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for contacts by their job titles, for example [\"Data Scientist\", "
            "\"Lawyer\"]. Titles are free text and may be any role name the user asks for.";
        f.guidelines = {
            "When the user asks for a specific role by name, put it here and leave "
            "management_levels and departments empty; titles is mutually exclusive with both.",
            "Normalize plurals to the singular form of the role: \"lawyers\" becomes "
            "\"Lawyer\".",
            "Expand well-known abbreviations when unambiguous, for example \"CTO\" to \"Chief "
            "Technology Officer\"."};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "contact_info";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::StringList;
        f.description =
            "Filter for contacts that have these kinds of contact information on record, for "
            "example [\"Phone\", \"Email\"].";
        f.guidelines = {
            "Must be zero or more of the listed choices.",
            "Only set this when the user explicitly asks for reachable contacts, for example "
            "\"with phone numbers\" or \"that have an email address\"."};
        f.word_bank = {"Phone", "Email", "Direct Dial", "Mobile Phone", "Mailing Address"};
        add(f);
    }
    {
        FieldSpec f;
        f.name = "person_or_company";
        f.kind = FieldKind::Categorical;
        f.shape = InputShape::ScalarString;
        f.description =
            "Whether the search is for people (contacts) or for companies. The value is the "
            "single string \"person\" or \"company\".";
        f.guidelines = {
            "Queries about roles, titles, departments, or named individuals are person "
            "searches; queries about firms, industries, or company attributes are company "
            "searches.",
            "Always set this field; every search is one or the other."};
        f.word_bank = {"person", "company"};
        add(f);
    }

    return SchemaRegistry(std::move(fields));
}

}  // namespace nlsearch
