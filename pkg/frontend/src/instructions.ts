// Per-step worker instructions; edit freely, the workflow does not parse them.

export const INSTRUCTIONS: Record<string, string> = {
  WRITE_QUESTION:
    "Read the review sentence below. Rewrite it as a standalone question " +
    "that a salesperson or a recommender agent might ask a customer, such " +
    "that it can simply be answered with yes or no. If the sentence cannot " +
    "be turned into a meaningful question, mark it as not applicable.",
  VALIDATE:
    "Review the question below and answer the four checks.",
  PARAPHRASE:
    "The three questions below express the same need. Write one new " +
    "question of your own that expresses the same meaning in a different way.",
};

export const VALIDATE_CHECKS: {
  key: "grammatical" | "yesno_answerable" | "mentions_usage" | "asker";
  label: string;
  options: { value: string; label: string }[];
}[] = [
  {
    key: "grammatical",
    label: "Is the question grammatically correct?",
    options: [
      { value: "yes", label: "Yes" },
      { value: "no", label: "No" },
    ],
  },
  {
    key: "yesno_answerable",
    label: "Can the question be answered by yes or no?",
    options: [
      { value: "yes", label: "Yes" },
      { value: "no", label: "No" },
    ],
  },
  {
    key: "mentions_usage",
    label: "Does the question mention any trait or use for a product?",
    options: [
      { value: "yes", label: "Yes" },
      { value: "no", label: "No" },
    ],
  },
  {
    key: "asker",
    label: "Who is most likely to ask this question in a sales setting?",
    options: [
      { value: "buyer", label: "Buyer" },
      { value: "salesperson", label: "Salesperson" },
      { value: "neither", label: "Neither" },
    ],
  },
];
