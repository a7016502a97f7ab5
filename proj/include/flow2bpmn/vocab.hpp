#pragma once

#include <string>

// IRI constants for the vocabularies the pipeline touches. The sf/bpmn/rl
// namespaces match the bundled ontology files under ontologies/.
namespace flow2bpmn::vocab {

inline const std::string rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string owl = "http://www.w3.org/2002/07/owl#";
inline const std::string xsd = "http://www.w3.org/2001/XMLSchema#";

inline const std::string sf = "https://example.org/smartflow#";
inline const std::string bpmn = "https://example.org/bpmn#";
inline const std::string rl = "https://example.org/rulelite#";
inline const std::string trace = "https://example.org/trace#";

inline const std::string rdf_type = rdf + "type";
inline const std::string rdfs_subClassOf = rdfs + "subClassOf";
inline const std::string rdfs_subPropertyOf = rdfs + "subPropertyOf";
inline const std::string rdfs_domain = rdfs + "domain";
inline const std::string rdfs_range = rdfs + "range";
inline const std::string rdfs_comment = rdfs + "comment";

inline const std::string owl_Class = owl + "Class";
inline const std::string owl_ObjectProperty = owl + "ObjectProperty";
inline const std::string owl_DatatypeProperty = owl + "DatatypeProperty";
inline const std::string owl_equivalentClass = owl + "equivalentClass";
inline const std::string owl_equivalentProperty = owl + "equivalentProperty";
inline const std::string owl_disjointWith = owl + "disjointWith";

// Smart Flow domain vocabulary.
inline const std::string sf_Node = sf + "Node";
inline const std::string sf_StartNode = sf + "StartNode";
inline const std::string sf_ActionNode = sf + "ActionNode";
inline const std::string sf_EndNode = sf + "EndNode";
inline const std::string sf_Transition = sf + "Transition";
inline const std::string sf_Queue = sf + "Queue";
inline const std::string sf_Form = sf + "Form";
inline const std::string sf_Processor = sf + "Processor";
inline const std::string sf_transitionsTo = sf + "transitionsTo";
inline const std::string sf_has_queue = sf + "has_queue";
inline const std::string sf_has_form = sf + "has_form";
inline const std::string sf_invokes = sf + "invokes";
inline const std::string sf_has_source = sf + "has_source";
inline const std::string sf_has_target = sf + "has_target";
inline const std::string sf_guard = sf + "guard";
inline const std::string sf_trigger = sf + "trigger";
inline const std::string sf_role = sf + "role";
inline const std::string sf_label = sf + "label";
inline const std::string sf_kind = sf + "kind";
inline const std::string sf_title = sf + "title";
inline const std::string sf_executor = sf + "executor";
inline const std::string sf_isDefault = sf + "isDefault";

// Target BPMN vocabulary (BBO-inspired minimal TBox).
inline const std::string bpmn_Process = bpmn + "Process";
inline const std::string bpmn_FlowNode = bpmn + "FlowNode";
inline const std::string bpmn_Task = bpmn + "Task";
inline const std::string bpmn_UserTask = bpmn + "UserTask";
inline const std::string bpmn_ServiceTask = bpmn + "ServiceTask";
inline const std::string bpmn_StartEvent = bpmn + "StartEvent";
inline const std::string bpmn_EndEvent = bpmn + "EndEvent";
inline const std::string bpmn_ExclusiveGateway = bpmn + "ExclusiveGateway";
inline const std::string bpmn_ParallelGateway = bpmn + "ParallelGateway";
inline const std::string bpmn_SequenceFlow = bpmn + "SequenceFlow";
inline const std::string bpmn_Lane = bpmn + "Lane";
inline const std::string bpmn_LaneSet = bpmn + "LaneSet";
inline const std::string bpmn_Pool = bpmn + "Pool";
inline const std::string bpmn_has_sourceRef = bpmn + "has_sourceRef";
inline const std::string bpmn_has_targetRef = bpmn + "has_targetRef";
inline const std::string bpmn_has_conditionExpression = bpmn + "has_conditionExpression";
inline const std::string bpmn_has_lane = bpmn + "has_lane";
inline const std::string bpmn_has_name = bpmn + "has_name";

// Rule-lite reification vocabulary.
inline const std::string rl_body = rl + "body";
inline const std::string rl_head = rl + "head";
inline const std::string rl_subject = rl + "subject";
inline const std::string rl_predicate = rl + "predicate";
inline const std::string rl_object = rl + "object";

// Traceability.
inline const std::string trace_sourcePath = trace + "sourcePath";

// RML / R2RML vocabulary consumed by the mapping loader.
inline const std::string rml = "http://semweb.mmlab.be/ns/rml#";
inline const std::string rr = "http://www.w3.org/ns/r2rml#";
inline const std::string rml_logicalSource = rml + "logicalSource";
inline const std::string rml_iterator = rml + "iterator";
inline const std::string rml_reference = rml + "reference";
inline const std::string rr_subjectMap = rr + "subjectMap";
inline const std::string rr_template = rr + "template";
inline const std::string rr_class = rr + "class";
inline const std::string rr_predicateObjectMap = rr + "predicateObjectMap";
inline const std::string rr_predicate = rr + "predicate";
inline const std::string rr_objectMap = rr + "objectMap";
inline const std::string rr_constant = rr + "constant";
inline const std::string rr_parentTriplesMap = rr + "parentTriplesMap";
inline const std::string rr_joinCondition = rr + "joinCondition";
inline const std::string rr_child = rr + "child";
inline const std::string rr_parent = rr + "parent";

inline const std::string kDefaultInstanceBase = "https://example.org/inst/";

}  // namespace flow2bpmn::vocab
